#pragma once

#include "gendiv/field.hpp"
#include "gendiv/order.hpp"

#include <cctype>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gendiv {

struct PolyRingData {
    CoeffField field;
    std::vector<std::string> vars;
};

// Ambient polynomial ring descriptor k[x1,...,xn]. Cheap to copy, compared by value.
class PolyRing {
public:
    PolyRing() : data_(std::make_shared<PolyRingData>(PolyRingData{CoeffField::rationals(), {}})) {}
    PolyRing(CoeffField field, std::vector<std::string> vars)
        : data_(std::make_shared<PolyRingData>(PolyRingData{field, std::move(vars)})) {
        for (size_t i = 0; i < nvars(); ++i)
            for (size_t j = i + 1; j < nvars(); ++j)
                if (var(i) == var(j)) throw std::invalid_argument("duplicate variable name " + var(i));
    }

    const CoeffField& field() const { return data_->field; }
    size_t nvars() const { return data_->vars.size(); }
    const std::string& var(size_t i) const { return data_->vars[i]; }
    const std::vector<std::string>& vars() const { return data_->vars; }

    int var_index(const std::string& name) const {
        for (size_t i = 0; i < nvars(); ++i)
            if (data_->vars[i] == name) return static_cast<int>(i);
        return -1;
    }

    bool operator==(const PolyRing& o) const {
        return data_ == o.data_ || (field() == o.field() && vars() == o.vars());
    }
    bool operator!=(const PolyRing& o) const { return !(*this == o); }

    std::string to_string() const {
        std::string s = field().to_string() + "[";
        for (size_t i = 0; i < nvars(); ++i) s += (i ? "," : "") + var(i);
        return s + "]";
    }

private:
    std::shared_ptr<const PolyRingData> data_;
};

// Sparse multivariate polynomial with exact coefficients. Zero coefficients
// are never stored; exponent vectors always have length nvars.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(PolyRing ring) : ring_(std::move(ring)) {}

    static Polynomial zero(const PolyRing& r) { return Polynomial(r); }

    static Polynomial constant(const PolyRing& r, const Rational& c) {
        Polynomial p(r);
        p.add_term(Exps(r.nvars(), 0), c);
        return p;
    }

    static Polynomial variable(const PolyRing& r, size_t i) {
        Polynomial p(r);
        Exps e(r.nvars(), 0);
        e[i] = 1;
        p.add_term(e, 1);
        return p;
    }

    static Polynomial monomial(const PolyRing& r, const Exps& e, const Rational& c = 1) {
        Polynomial p(r);
        p.add_term(e, c);
        return p;
    }

    const PolyRing& ring() const { return ring_; }
    const std::map<Exps, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
    }

    Rational constant_value() const {
        if (terms_.empty()) return 0;
        auto it = terms_.find(Exps(ring_.nvars(), 0));
        return it == terms_.end() ? Rational(0) : it->second;
    }

    int degree() const {
        int d = -1;
        for (auto& [e, c] : terms_) d = std::max(d, total_degree(e));
        return d;
    }

    int degree_in(size_t var) const {
        int d = -1;
        for (auto& [e, c] : terms_) d = std::max(d, e[var]);
        return d;
    }

    std::vector<int> support_vars() const {
        std::vector<char> used(ring_.nvars(), 0);
        for (auto& [e, c] : terms_)
            for (size_t i = 0; i < e.size(); ++i)
                if (e[i] > 0) used[i] = 1;
        std::vector<int> out;
        for (size_t i = 0; i < used.size(); ++i)
            if (used[i]) out.push_back(static_cast<int>(i));
        return out;
    }

    void add_term(const Exps& e, const Rational& c) {
        if (e.size() != ring_.nvars()) throw std::invalid_argument("exponent vector length mismatch");
        Rational v = ring_.field().normalize(c);
        if (v == 0) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, v);
        } else {
            it->second = ring_.field().add(it->second, v);
            if (it->second == 0) terms_.erase(it);
        }
    }

    Polynomial operator+(const Polynomial& o) const {
        check_ring(o);
        Polynomial r = *this;
        for (auto& [e, c] : o.terms_) r.add_term(e, c);
        return r;
    }

    Polynomial operator-(const Polynomial& o) const {
        check_ring(o);
        Polynomial r = *this;
        for (auto& [e, c] : o.terms_) r.add_term(e, ring_.field().neg(c));
        return r;
    }

    Polynomial operator-() const {
        Polynomial r(ring_);
        for (auto& [e, c] : terms_) r.terms_.emplace(e, ring_.field().neg(c));
        return r;
    }

    Polynomial operator*(const Polynomial& o) const {
        check_ring(o);
        Polynomial r(ring_);
        for (auto& [e1, c1] : terms_)
            for (auto& [e2, c2] : o.terms_)
                r.add_term(exps_add(e1, e2), ring_.field().mul(c1, c2));
        return r;
    }

    Polynomial scaled(const Rational& c) const {
        Polynomial r(ring_);
        Rational v = ring_.field().normalize(c);
        if (v == 0) return r;
        for (auto& [e, k] : terms_) r.terms_.emplace(e, ring_.field().mul(k, v));
        return r;
    }

    Polynomial times_monomial(const Exps& m, const Rational& c) const {
        Polynomial r(ring_);
        Rational v = ring_.field().normalize(c);
        if (v == 0) return r;
        for (auto& [e, k] : terms_) r.terms_.emplace(exps_add(e, m), ring_.field().mul(k, v));
        return r;
    }

    bool operator==(const Polynomial& o) const { return ring_ == o.ring_ && terms_ == o.terms_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    // Leading term under ord (throws on zero).
    std::pair<Exps, Rational> leading_term(const MonomialOrder& ord) const {
        if (terms_.empty()) throw std::logic_error("leading term of zero polynomial");
        auto best = terms_.begin();
        for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it)
            if (ord.greater(it->first, best->first)) best = it;
        return {best->first, best->second};
    }

    Polynomial monic(const MonomialOrder& ord) const {
        if (terms_.empty()) return *this;
        return scaled(ring_.field().inv(leading_term(ord).second));
    }

    Rational coeff(const Exps& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Polynomial derivative(size_t var) const {
        Polynomial r(ring_);
        for (auto& [e, c] : terms_) {
            if (e[var] == 0) continue;
            Exps e2 = e;
            e2[var] -= 1;
            r.add_term(e2, ring_.field().mul(c, Rational(e[var])));
        }
        return r;
    }

    std::string to_string(const MonomialOrder& ord = MonomialOrder::grevlex()) const {
        if (terms_.empty()) return "0";
        std::vector<const std::pair<const Exps, Rational>*> ts;
        for (auto& t : terms_) ts.push_back(&t);
        std::sort(ts.begin(), ts.end(), [&](auto* a, auto* b) { return ord.greater(a->first, b->first); });
        std::string out;
        bool first = true;
        for (auto* t : ts) {
            Rational c = t->second;
            bool neg = c < 0;
            if (first) {
                if (neg) out += "-";
            } else {
                out += neg ? " - " : " + ";
            }
            if (neg) c = -c;
            std::string mono = monomial_string(t->first);
            if (mono.empty()) {
                out += rational_to_string(c);
            } else {
                if (c != 1) out += rational_to_string(c) + "*";
                out += mono;
            }
            first = false;
        }
        return out;
    }

private:
    void check_ring(const Polynomial& o) const {
        if (ring_ != o.ring_) throw std::invalid_argument("polynomial ring mismatch");
    }

    std::string monomial_string(const Exps& e) const {
        std::string s;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!s.empty()) s += "*";
            s += ring_.var(i);
            if (e[i] > 1) s += "^" + std::to_string(e[i]);
        }
        return s;
    }

    PolyRing ring_;
    std::map<Exps, Rational> terms_;
};

// ---- expression parser (used by the CLI and tests) ----------------------
//
// expr    := term (('+'|'-') term)*
// term    := factor ('*' factor)*
// factor  := atom ('^' uint)?
// atom    := rational | variable | '(' expr ')' | '-' atom
// rational:= int ('/' uint)?

class PolyParser {
public:
    PolyParser(const PolyRing& ring, std::string text) : ring_(ring), s_(std::move(text)) {}

    Polynomial parse() {
        Polynomial p = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing characters");
        return p;
    }

private:
    Polynomial expr() {
        skip_ws();
        bool neg = false;
        while (peek() == '+' || peek() == '-') {
            if (get() == '-') neg = !neg;
            skip_ws();
        }
        Polynomial p = term();
        if (neg) p = -p;
        skip_ws();
        while (peek() == '+' || peek() == '-') {
            char op = get();
            Polynomial q = term();
            p = (op == '+') ? p + q : p - q;
            skip_ws();
        }
        return p;
    }

    Polynomial term() {
        Polynomial p = factor();
        skip_ws();
        while (peek() == '*') {
            get();
            p = p * factor();
            skip_ws();
        }
        return p;
    }

    Polynomial factor() {
        Polynomial p = atom();
        skip_ws();
        if (peek() == '^') {
            get();
            skip_ws();
            long e = read_uint();
            Polynomial r = Polynomial::constant(ring_, 1);
            for (long i = 0; i < e; ++i) r = r * p;
            p = r;
        }
        return p;
    }

    Polynomial atom() {
        skip_ws();
        char c = peek();
        if (c == '-') {
            get();
            return -atom();
        }
        if (c == '(') {
            get();
            Polynomial p = expr();
            skip_ws();
            if (get() != ')') fail("expected ')'");
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Integer num(read_digits());
            skip_ws();
            if (peek() == '/') {
                size_t save = pos_;
                get();
                skip_ws();
                if (std::isdigit(static_cast<unsigned char>(peek()))) {
                    Integer den(read_digits());
                    return Polynomial::constant(ring_, Rational(num, den));
                }
                pos_ = save;
            }
            return Polynomial::constant(ring_, Rational(num));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name = read_ident();
            int idx = ring_.var_index(name);
            if (idx < 0) fail("unknown variable '" + name + "' in ring " + ring_.to_string());
            return Polynomial::variable(ring_, idx);
        }
        fail("unexpected character");
        return Polynomial(ring_);
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    char get() { return pos_ < s_.size() ? s_[pos_++] : '\0'; }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    std::string read_digits() {
        std::string d;
        while (std::isdigit(static_cast<unsigned char>(peek()))) d += get();
        if (d.empty()) fail("expected digits");
        return d;
    }

    long read_uint() {
        std::string d = read_digits();
        return std::stol(d);
    }

    std::string read_ident() {
        std::string n;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') n += get();
        return n;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("polynomial parse error at position " + std::to_string(pos_) +
                                    ": " + msg + " in \"" + s_ + "\"");
    }

    PolyRing ring_;
    std::string s_;
    size_t pos_ = 0;
};

inline Polynomial parse_poly(const PolyRing& ring, const std::string& text) {
    return PolyParser(ring, text).parse();
}

} // namespace gendiv
