#pragma once

#include "gendiv/stack.hpp"

#include <map>
#include <sstream>

namespace gendiv {

struct ParseError : std::runtime_error {
    explicit ParseError(size_t line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_no(line) {}
    size_t line_no;
};

// One `assert` statement with its references resolved and arguments parsed.
struct Assertion {
    std::string kind;
    bool negated = false;
    std::vector<std::string> refs;
    std::vector<Polynomial> polys;
    std::vector<std::vector<Polynomial>> poly_groups;
    std::vector<int> numbers;
    std::string expect;
    bool exhaustive = false;
    size_t line = 0;
};

struct Declaration {
    std::string kind;
    std::string name;
};

// Parsed and semantically validated input document. Declarations are
// resolved into live objects at parse time; assertions run later.
struct Document {
    std::map<std::string, CoeffField> fields;
    std::map<std::string, QuotientRing> rings;
    std::map<std::string, std::pair<std::string, Ideal>> ideals;   // name -> (ring, ideal)
    std::map<std::string, std::pair<std::string, PrimeIdeal>> primes;
    std::map<std::string, std::pair<std::string, Module>> modules;
    std::map<std::string, RingMap> ring_maps;
    std::map<std::string, EtaleCertificate> etales;
    std::map<std::string, GroupTable> groups;
    std::map<std::string, GroupGroupoid> actions;
    std::map<std::string, EquivariantModule> equivariants;
    std::vector<Assertion> assertions;
    std::vector<Declaration> order;
    // reference names for canonical reprinting
    std::map<std::string, std::pair<std::string, std::vector<std::string>>> etale_refs;
    std::map<std::string, std::string> action_refs;                          // action -> group
    std::map<std::string, std::pair<std::string, std::string>> equivariant_refs; // -> (module, action)
    bool has_trusted_primes = false;
    std::string source;

    bool name_taken(const std::string& n) const {
        return fields.count(n) || rings.count(n) || ideals.count(n) || primes.count(n) ||
               modules.count(n) || ring_maps.count(n) || etales.count(n) || groups.count(n) ||
               actions.count(n) || equivariants.count(n);
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_top(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (c == sep && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
    while (!out.empty() && out.back().empty()) out.pop_back();
    return out;
}

inline std::vector<std::string> tokens(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string t;
    while (is >> t) out.push_back(t);
    return out;
}

// contents of the first (...) group starting at or after `from`
inline std::string paren_group(const std::string& s, size_t& from, size_t line) {
    size_t open = s.find('(', from);
    if (open == std::string::npos) throw ParseError(line, "expected '('");
    int depth = 0;
    for (size_t i = open; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') {
            --depth;
            if (depth == 0) {
                from = i + 1;
                return s.substr(open + 1, i - open - 1);
            }
        }
    }
    throw ParseError(line, "unbalanced parentheses");
}

} // namespace detail

class DocumentParser {
public:
    explicit DocumentParser(std::string text) { doc_.source = std::move(text); }

    Document parse() {
        std::istringstream is(doc_.source);
        std::string raw;
        size_t line_no = 0;
        while (std::getline(is, raw)) {
            ++line_no;
            std::string line = raw;
            size_t hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = detail::trim(line);
            if (line.empty()) continue;
            parse_line(line, line_no);
        }
        return doc_;
    }

private:
    void parse_line(const std::string& line, size_t n) {
        auto toks = detail::tokens(line);
        const std::string& head = toks[0];
        try {
            if (head == "field") parse_field(line, n);
            else if (head == "ring") parse_ring(line, n);
            else if (head == "ideal") parse_ideal(line, n);
            else if (head == "prime") parse_prime(line, n);
            else if (head == "module") parse_module(line, n);
            else if (head == "map") parse_map(line, n);
            else if (head == "etale") parse_etale(line, n);
            else if (head == "group") parse_group(line, n);
            else if (head == "action") parse_action(line, n);
            else if (head == "equivariant") parse_equivariant(line, n);
            else if (head == "assert") parse_assert(line, n);
            else throw ParseError(n, "unknown declaration '" + head + "'");
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(n, e.what());
        }
    }

    void declare(const std::string& kind, const std::string& name, size_t n) {
        if (doc_.name_taken(name)) throw ParseError(n, "duplicate name '" + name + "'");
        doc_.order.push_back(Declaration{kind, name});
    }

    CoeffField resolve_field(const std::string& tok, size_t n) {
        auto it = doc_.fields.find(tok);
        if (it != doc_.fields.end()) return it->second;
        if (tok == "Q") return CoeffField::rationals();
        if (tok.rfind("Fp", 0) == 0 && tok.size() > 2)
            return CoeffField::prime_field(std::stoll(tok.substr(2)));
        throw ParseError(n, "unknown field '" + tok + "'");
    }

    const QuotientRing& resolve_ring(const std::string& name, size_t n) {
        auto it = doc_.rings.find(name);
        if (it == doc_.rings.end()) throw ParseError(n, "unknown ring '" + name + "'");
        return it->second;
    }

    std::vector<Polynomial> parse_poly_list(const PolyRing& r, const std::string& group, size_t n) {
        std::vector<Polynomial> out;
        for (auto& part : detail::split_top(group, ',')) {
            if (part.empty()) continue;
            out.push_back(parse_poly(r, part));
        }
        (void)n;
        return out;
    }

    // field NAME = Q | Fp <p>
    void parse_field(const std::string& line, size_t n) {
        auto toks = detail::tokens(line);
        if (toks.size() < 4 || toks[2] != "=") throw ParseError(n, "expected: field NAME = Q | Fp <p>");
        declare("field", toks[1], n);
        if (toks[3] == "Q" && toks.size() == 4) {
            doc_.fields.emplace(toks[1], CoeffField::rationals());
        } else if (toks[3] == "Fp" && toks.size() == 5) {
            doc_.fields.emplace(toks[1], CoeffField::prime_field(std::stoll(toks[4])));
        } else {
            throw ParseError(n, "expected: field NAME = Q | Fp <p>");
        }
    }

    // ring NAME = F[v1,...,vn] / (g1, ..., gk)
    void parse_ring(const std::string& line, size_t n) {
        auto toks = detail::tokens(line);
        if (toks.size() < 4 || toks[2] != "=") throw ParseError(n, "expected: ring NAME = F[vars] / (rels)");
        std::string rest;
        {
            size_t eq = line.find('=');
            rest = detail::trim(line.substr(eq + 1));
        }
        size_t lb = rest.find('[');
        size_t rb = rest.find(']');
        if (lb == std::string::npos || rb == std::string::npos || rb < lb)
            throw ParseError(n, "expected variable list in brackets");
        CoeffField F = resolve_field(detail::trim(rest.substr(0, lb)), n);
        std::vector<std::string> vars;
        for (auto& v : detail::split_top(rest.substr(lb + 1, rb - lb - 1), ','))
            if (!v.empty()) vars.push_back(v);
        PolyRing P(F, vars);
        std::vector<Polynomial> rels;
        std::string tail = detail::trim(rest.substr(rb + 1));
        if (!tail.empty()) {
            if (tail[0] != '/') throw ParseError(n, "expected '/' before relations");
            size_t from = 0;
            std::string group = detail::paren_group(tail, from, n);
            rels = parse_poly_list(P, group, n);
        }
        declare("ring", toks[1], n);
        doc_.rings.emplace(toks[1], QuotientRing(P, Ideal(P, rels), toks[1]));
    }

    // ideal NAME in RING = (f1, ..., fm)
    void parse_ideal(const std::string& line, size_t n) {
        auto toks = detail::tokens(line);
        if (toks.size() < 5 || toks[2] != "in") throw ParseError(n, "expected: ideal NAME in RING = (gens)");
        const QuotientRing& A = resolve_ring(toks[3], n);
        size_t from = line.find('=');
        if (from == std::string::npos) throw ParseError(n, "expected '='");
        std::string group = detail::paren_group(line, from, n);
        declare("ideal", toks[1], n);
        doc_.ideals.emplace(toks[1],
                            std::make_pair(toks[3], Ideal(A.ambient(),
                                                          parse_poly_list(A.ambient(), group, n))));
    }

    // prime NAME in RING = (f1, ...) [trusted]
    void parse_prime(const std::string& line, size_t n) {
        auto toks = detail::tokens(line);
        if (toks.size() < 5 || toks[2] != "in") throw ParseError(n, "expected: prime NAME in RING = (gens) [trusted]");
        const QuotientRing& A = resolve_ring(toks[3], n);
        size_t from = line.find('=');
        if (from == std::string::npos) throw ParseError(n, "expected '='");
        std::string group = detail::paren_group(line, from, n);
        bool trusted = detail::trim(line.substr(from)).rfind("trusted") != std::string::npos &&
                       line.substr(from).find("trusted") != std::string::npos;
        std::vector<Polynomial> gens = parse_poly_list(A.ambient(), group, n);
        Trust trust = trusted ? Trust::Trusted : Trust::Declared;
        PrimeIdeal p = ring_prime(A, gens, trust);
        if (!trusted) {
            bool ok;
            try {
                ok = verify_declared_prime(p.ideal);
            } catch (const UnsupportedIdealClass& e) {
                throw ParseError(n, std::string("cannot verify primality: ") + e.what() +
                                        " (declare it 'trusted' and run with --trust-primes)");
            }
            if (!ok) throw ParseError(n, "declared ideal is not prime");
        } else {
            doc_.has_trusted_primes = true;
        }
        declare("prime", toks[1], n);
        doc_.primes.emplace(toks[1], std::make_pair(toks[3], p));
    }

    // module NAME over RING = coker [[r11, r12; r21, r22]] gens <g>
    // module NAME over RING = ideal (f1, ..., fk)
    void parse_module(const std::string& line, size_t n) {
        auto toks = detail::tokens(line);
        if (toks.size() < 6 || toks[2] != "over") throw ParseError(n, "expected: module NAME over RING = ...");
        const QuotientRing& A = resolve_ring(toks[3], n);
        size_t eq = line.find('=');
        std::string rest = detail::trim(line.substr(eq + 1));
        declare("module", toks[1], n);
        if (rest.rfind("ideal", 0) == 0) {
            size_t from = 0;
            std::string group = detail::paren_group(rest, from, n);
            Module M = Module::from_ideal(A, parse_poly_list(A.ambient(), group, n));
            doc_.modules.emplace(toks[1], std::make_pair(toks[3], M));
            return;
        }
        if (rest.rfind("coker", 0) != 0) throw ParseError(n, "expected 'coker' or 'ideal'");
        size_t lb = rest.find("[[");
        size_t rb = rest.rfind("]]");
        if (lb == std::string::npos || rb == std::string::npos)
            throw ParseError(n, "expected matrix [[...]]");
        std::string mat_text = rest.substr(lb + 2, rb - lb - 2);
        std::string tail = detail::trim(rest.substr(rb + 2));
        auto tail_toks = detail::tokens(tail);
        if (tail_toks.size() != 2 || tail_toks[0] != "gens")
            throw ParseError(n, "expected 'gens <count>' after the matrix");
        size_t gens = std::stoul(tail_toks[1]);
        std::vector<std::vector<Polynomial>> rows;
        if (!detail::trim(mat_text).empty()) {
            for (auto& row_text : detail::split_top(mat_text, ';')) {
                std::vector<Polynomial> row;
                for (auto& cell : detail::split_top(row_text, ','))
                    row.push_back(parse_poly(A.ambient(), cell));
                rows.push_back(std::move(row));
            }
        }
        if (!rows.empty() && rows.size() != gens)
            throw ParseError(n, "matrix row count disagrees with 'gens'");
        size_t cols = rows.empty() ? 0 : rows[0].size();
        for (auto& r : rows)
            if (r.size() != cols) throw ParseError(n, "ragged matrix");
        PolyMatrix rel(A.ambient(), gens, cols);
        for (size_t i = 0; i < rows.size(); ++i)
            for (size_t j = 0; j < cols; ++j) rel.at(i, j) = rows[i][j];
        doc_.modules.emplace(toks[1], std::make_pair(toks[3], Module(A, gens, rel)));
    }

    // map NAME : R1 -> R2 on v1 -> e1, v2 -> e2
    void parse_map(const std::string& line, size_t n) {
        auto toks = detail::tokens(line);
        if (toks.size() < 7 || toks[2] != ":" || toks[4] != "->")
            throw ParseError(n, "expected: map NAME : R1 -> R2 on v -> e, ...");
        const QuotientRing& S = resolve_ring(toks[3], n);
        const QuotientRing& T = resolve_ring(toks[5], n);
        size_t on = line.find(" on ");
        if (on == std::string::npos) throw ParseError(n, "expected 'on' with variable images");
        std::map<std::string, Polynomial> images;
        for (auto& part : detail::split_top(line.substr(on + 4), ',')) {
            size_t arrow = part.find("->");
            if (arrow == std::string::npos) throw ParseError(n, "expected 'v -> expr'");
            std::string var = detail::trim(part.substr(0, arrow));
            images.emplace(var, parse_poly(T.ambient(), detail::trim(part.substr(arrow + 2))));
        }
        std::vector<Polynomial> imgs;
        for (size_t i = 0; i < S.nvars(); ++i) {
            auto it = images.find(S.ambient().var(i));
            if (it == images.end())
                throw ParseError(n, "missing image for variable " + S.ambient().var(i));
            imgs.push_back(it->second);
        }
        declare("map", toks[1], n);
        doc_.ring_maps.emplace(toks[1], RingMap(S, T, imgs));
    }

    // etale NAME of MAP vars (t, ...) presentation (f1, ...) jacobian (expr) [at (p1, p2)]
    void parse_etale(const std::string& line, size_t n) {
        auto toks = detail::tokens(line);
        if (toks.size() < 4 || toks[2] != "of") throw ParseError(n, "expected: etale NAME of MAP ...");
        auto mit = doc_.ring_maps.find(toks[3]);
        if (mit == doc_.ring_maps.end()) throw ParseError(n, "unknown map '" + toks[3] + "'");
        const RingMap& f = mit->second;
        size_t pos = line.find(" vars ");
        if (pos == std::string::npos) throw ParseError(n, "expected 'vars (...)'");
        size_t from = pos;
        std::string vars_group = detail::paren_group(line, from, n);
        std::vector<std::string> pvars;
        for (auto& v : detail::split_top(vars_group, ','))
            if (!v.empty()) pvars.push_back(v);
        size_t ppos = line.find(" presentation ", from);
        if (ppos == std::string::npos) throw ParseError(n, "expected 'presentation (...)'");
        from = ppos;
        std::string pres_group = detail::paren_group(line, from, n);
        std::vector<Polynomial> rels = parse_poly_list(f.target().ambient(), pres_group, n);
        size_t jpos = line.find(" jacobian ", from);
        if (jpos == std::string::npos) throw ParseError(n, "expected 'jacobian (expr)'");
        from = jpos;
        std::string jac_group = detail::paren_group(line, from, n);
        Polynomial jac = parse_poly(f.target().ambient(), jac_group);
        std::vector<PrimeIdeal> primes;
        std::vector<std::string> prime_names;
        size_t apos = line.find(" at ", from);
        if (apos != std::string::npos) {
            from = apos;
            std::string prime_group = detail::paren_group(line, from, n);
            for (auto& pname : detail::split_top(prime_group, ',')) {
                auto pit = doc_.primes.find(pname);
                if (pit == doc_.primes.end()) throw ParseError(n, "unknown prime '" + pname + "'");
                primes.push_back(pit->second.second);
                prime_names.push_back(pname);
            }
        }
        declare("etale", toks[1], n);
        doc_.etales.emplace(toks[1], certify_etale(f, pvars, rels, primes, jac));
        doc_.etale_refs.emplace(toks[1], std::make_pair(toks[3], prime_names));
    }

    // group NAME = table{e, s; s, e}
    void parse_group(const std::string& line, size_t n) {
        auto toks = detail::tokens(line);
        if (toks.size() < 3) throw ParseError(n, "expected: group NAME = table{...}");
        size_t lb = line.find('{');
        size_t rb = line.rfind('}');
        if (lb == std::string::npos || rb == std::string::npos)
            throw ParseError(n, "expected table{...}");
        std::string body = line.substr(lb + 1, rb - lb - 1);
        std::vector<std::vector<std::string>> rows;
        for (auto& row_text : detail::split_top(body, ';')) {
            std::vector<std::string> row;
            for (auto& cell : detail::split_top(row_text, ','))
                row.push_back(cell);
            rows.push_back(std::move(row));
        }
        if (rows.empty()) throw ParseError(n, "empty group table");
        // the first row lists the products e*g = g, i.e. the element names
        std::vector<std::string> names = rows[0];
        std::vector<std::vector<size_t>> table;
        for (auto& row : rows) {
            std::vector<size_t> trow;
            for (auto& cell : row) {
                size_t idx = names.size();
                for (size_t i = 0; i < names.size(); ++i)
                    if (names[i] == cell) idx = i;
                if (idx == names.size()) throw ParseError(n, "unknown element '" + cell + "' in table");
                trow.push_back(idx);
            }
            table.push_back(std::move(trow));
        }
        declare("group", toks[1], n);
        doc_.groups.emplace(toks[1], GroupTable(names, table));
    }

    // action NAME of GROUP on RING : e: u -> u; s: u -> -u
    void parse_action(const std::string& line, size_t n) {
        auto toks = detail::tokens(line);
        if (toks.size() < 8 || toks[2] != "of" || toks[4] != "on")
            throw ParseError(n, "expected: action NAME of GROUP on RING : g: v -> e; ...");
        auto git = doc_.groups.find(toks[3]);
        if (git == doc_.groups.end()) throw ParseError(n, "unknown group '" + toks[3] + "'");
        const GroupTable& G = git->second;
        const QuotientRing& A = resolve_ring(toks[5], n);
        size_t colon = line.find(" : ");
        if (colon == std::string::npos) throw ParseError(n, "expected ':' before the assignments");
        std::vector<std::optional<RingMap>> maps(G.size());
        for (auto& part : detail::split_top(line.substr(colon + 3), ';')) {
            size_t c2 = part.find(':');
            if (c2 == std::string::npos) throw ParseError(n, "expected 'g: v -> e'");
            std::string gname = detail::trim(part.substr(0, c2));
            int gi = G.index_of(gname);
            if (gi < 0) throw ParseError(n, "unknown group element '" + gname + "'");
            std::map<std::string, Polynomial> images;
            for (auto& asg : detail::split_top(part.substr(c2 + 1), ',')) {
                size_t arrow = asg.find("->");
                if (arrow == std::string::npos) throw ParseError(n, "expected 'v -> expr'");
                images.emplace(detail::trim(asg.substr(0, arrow)),
                               parse_poly(A.ambient(), detail::trim(asg.substr(arrow + 2))));
            }
            std::vector<Polynomial> imgs;
            for (size_t i = 0; i < A.nvars(); ++i) {
                auto it = images.find(A.ambient().var(i));
                if (it == images.end())
                    throw ParseError(n, "missing image for variable " + A.ambient().var(i));
                imgs.push_back(it->second);
            }
            maps[static_cast<size_t>(gi)] = RingMap(A, A, imgs);
        }
        if (!maps[G.identity()]) maps[G.identity()] = RingMap::identity(A);
        std::vector<RingMap> action;
        for (size_t g = 0; g < G.size(); ++g) {
            if (!maps[g]) throw ParseError(n, "missing action of element " + G.name(g));
            action.push_back(*maps[g]);
        }
        declare("action", toks[1], n);
        doc_.actions.emplace(toks[1], build_group_groupoid(A, G, action));
        doc_.action_refs.emplace(toks[1], toks[3]);
    }

    // equivariant NAME = MODULE with ACTION : e: [[1]]; s: [[-1]]
    void parse_equivariant(const std::string& line, size_t n) {
        auto toks = detail::tokens(line);
        if (toks.size() < 6 || toks[2] != "=" || toks[4] != "with")
            throw ParseError(n, "expected: equivariant NAME = MODULE with ACTION : g: [[..]]; ...");
        auto mit = doc_.modules.find(toks[3]);
        if (mit == doc_.modules.end()) throw ParseError(n, "unknown module '" + toks[3] + "'");
        auto ait = doc_.actions.find(toks[5]);
        if (ait == doc_.actions.end()) throw ParseError(n, "unknown action '" + toks[5] + "'");
        const GroupGroupoid& G = ait->second;
        const Module& M = mit->second.second;
        if (M.ring() != G.chart())
            throw ParseError(n, "module and action live on different rings");
        size_t colon = line.find(" : ");
        if (colon == std::string::npos) throw ParseError(n, "expected ':' before the matrices");
        std::vector<std::optional<PolyMatrix>> mats(G.group().size());
        for (auto& part : detail::split_top(line.substr(colon + 3), ';')) {
            size_t c2 = part.find(':');
            if (c2 == std::string::npos) throw ParseError(n, "expected 'g: [[...]]'");
            std::string gname = detail::trim(part.substr(0, c2));
            int gi = G.group().index_of(gname);
            if (gi < 0) throw ParseError(n, "unknown group element '" + gname + "'");
            std::string mtext = detail::trim(part.substr(c2 + 1));
            size_t lb = mtext.find("[[");
            size_t rb = mtext.rfind("]]");
            if (lb == std::string::npos || rb == std::string::npos)
                throw ParseError(n, "expected matrix [[...]]");
            std::string body = mtext.substr(lb + 2, rb - lb - 2);
            PolyMatrix L(G.chart().ambient(), M.gens(), M.gens());
            auto rows = detail::split_top(body, ';');
            if (rows.size() != M.gens()) throw ParseError(n, "matrix shape mismatch");
            for (size_t i = 0; i < rows.size(); ++i) {
                auto cells = detail::split_top(rows[i], ',');
                if (cells.size() != M.gens()) throw ParseError(n, "matrix shape mismatch");
                for (size_t j = 0; j < cells.size(); ++j)
                    L.at(i, j) = parse_poly(G.chart().ambient(), cells[j]);
            }
            mats[static_cast<size_t>(gi)] = L;
        }
        if (!mats[G.group().identity()])
            mats[G.group().identity()] = PolyMatrix::identity(G.chart().ambient(), M.gens());
        std::vector<PolyMatrix> action_mats;
        for (size_t g = 0; g < G.group().size(); ++g) {
            if (!mats[g]) throw ParseError(n, "missing matrix for element " + G.group().name(g));
            action_mats.push_back(*mats[g]);
        }
        declare("equivariant", toks[1], n);
        doc_.equivariants.emplace(toks[1], EquivariantModule{G, M, action_mats});
        doc_.equivariant_refs.emplace(toks[1], std::make_pair(toks[3], toks[5]));
    }

    void parse_assert(const std::string& line, size_t n) {
        std::string rest = detail::trim(line.substr(6));
        Assertion a;
        a.line = n;
        if (rest.rfind("not ", 0) == 0) {
            a.negated = true;
            rest = detail::trim(rest.substr(4));
        }
        auto toks = detail::tokens(rest);
        if (toks.empty()) throw ParseError(n, "empty assertion");
        a.kind = toks[0];

        auto need_module = [&](const std::string& name) -> const Module& {
            auto it = doc_.modules.find(name);
            if (it == doc_.modules.end()) throw ParseError(n, "unknown module '" + name + "'");
            return it->second.second;
        };
        auto need_ring = [&](const std::string& name) -> const QuotientRing& {
            return resolve_ring(name, n);
        };
        auto need_prime = [&](const std::string& name) {
            if (!doc_.primes.count(name)) throw ParseError(n, "unknown prime '" + name + "'");
        };
        auto need_map = [&](const std::string& name) -> const RingMap& {
            auto it = doc_.ring_maps.find(name);
            if (it == doc_.ring_maps.end()) throw ParseError(n, "unknown map '" + name + "'");
            return it->second;
        };
        auto need_etale = [&](const std::string& name) -> const EtaleCertificate& {
            auto it = doc_.etales.find(name);
            if (it == doc_.etales.end()) throw ParseError(n, "unknown etale certificate '" + name + "'");
            return it->second;
        };
        auto need_equivariant = [&](const std::string& name) -> const EquivariantModule& {
            auto it = doc_.equivariants.find(name);
            if (it == doc_.equivariants.end())
                throw ParseError(n, "unknown equivariant module '" + name + "'");
            return it->second;
        };
        auto trailing_int = [&](const std::string& key) {
            for (size_t i = 0; i + 1 < toks.size(); ++i)
                if (toks[i] == key) return std::stoi(toks[i + 1]);
            throw ParseError(n, "expected '" + key + " <n>'");
        };
        auto primes_after_at = [&]() {
            bool seen_at = false;
            for (auto& t : toks) {
                if (t == "at") { seen_at = true; continue; }
                if (!seen_at) continue;
                if (t == "exhaustive") { a.exhaustive = true; continue; }
                need_prime(t);
                a.refs.push_back(t);
            }
            if (!seen_at) throw ParseError(n, "expected 'at <primes>'");
        };
        auto expected_after_eq = [&](const PolyRing& P) {
            size_t eq = rest.find('=');
            if (eq == std::string::npos) throw ParseError(n, "expected '= (...)'");
            size_t from = eq;
            std::string group = detail::paren_group(rest, from, n);
            a.poly_groups.push_back(parse_poly_list(P, group, n));
        };
        auto coords_group = [&](const PolyRing& P, const std::string& group) {
            std::vector<Polynomial> coords;
            for (auto& c : detail::split_top(group, ';')) coords.push_back(parse_poly(P, c));
            return coords;
        };

        if (a.kind == "member") {
            if (toks.size() < 4) throw ParseError(n, "expected: member (f) in IDEAL");
            std::string iname = toks.back();
            auto it = doc_.ideals.find(iname);
            if (it == doc_.ideals.end()) throw ParseError(n, "unknown ideal '" + iname + "'");
            size_t from = 0;
            std::string g = detail::paren_group(rest, from, n);
            a.polys.push_back(parse_poly(it->second.second.ambient(), g));
            a.refs.push_back(iname);
        } else if (a.kind == "unit" || a.kind == "nzd") {
            std::string rname = toks.back();
            const QuotientRing& A = need_ring(rname);
            size_t from = 0;
            std::string g = detail::paren_group(rest, from, n);
            a.polys.push_back(parse_poly(A.ambient(), g));
            a.refs.push_back(rname);
        } else if (a.kind == "dim") {
            need_ring(toks[1]);
            a.refs.push_back(toks[1]);
            a.numbers.push_back(trailing_int("="));
        } else if (a.kind == "localdim" || a.kind == "depth") {
            if (a.kind == "localdim") need_ring(toks[1]);
            else if (!doc_.modules.count(toks[1])) need_ring(toks[1]);
            a.refs.push_back(toks[1]);
            if (toks[2] != "at") throw ParseError(n, "expected 'at PRIME'");
            need_prime(toks[3]);
            a.refs.push_back(toks[3]);
            a.numbers.push_back(trailing_int("="));
        } else if (a.kind == "gorenstein") {
            need_ring(toks[1]);
            a.refs.push_back(toks[1]);
            if (toks[2] != "at") throw ParseError(n, "expected 'at PRIME'");
            need_prime(toks[3]);
            a.refs.push_back(toks[3]);
        } else if (a.kind == "gr" || a.kind == "sr") {
            if (a.kind == "sr" && doc_.modules.count(toks[1])) {
                // module subject
            } else {
                need_ring(toks[1]);
            }
            a.refs.push_back(toks[1]);
            a.numbers.push_back(std::stoi(toks[2]));
            a.refs.push_back("@"); // marker: primes follow
            primes_after_at();
        } else if (a.kind == "minimalprimes") {
            need_ring(toks[1]);
            a.refs.push_back(toks[1]);
            for (size_t i = 3; i < toks.size(); ++i) {
                need_prime(toks[i]);
                a.refs.push_back(toks[i]);
            }
        } else if (a.kind == "associated") {
            need_module(toks[1]);
            a.refs.push_back(toks[1]);
            for (size_t i = 3; i < toks.size(); ++i) {
                need_prime(toks[i]);
                a.refs.push_back(toks[i]);
            }
        } else if (a.kind == "embedded" || a.kind == "reflexive" || a.kind == "divisor") {
            need_module(toks[1]);
            a.refs.push_back(toks[1]);
        } else if (a.kind == "etale") {
            need_etale(toks[1]);
            a.refs.push_back(toks[1]);
            if (toks.size() >= 4 && toks[2] == "at") {
                need_prime(toks[3]);
                a.refs.push_back(toks[3]);
            }
        } else if (a.kind == "contract") {
            need_map(toks[1]);
            need_prime(toks[2]);
            if (toks[3] != "=") throw ParseError(n, "expected '= PRIME'");
            need_prime(toks[4]);
            a.refs = {toks[1], toks[2], toks[4]};
        } else if (a.kind == "localformulas") {
            need_etale(toks[1]);
            if (toks[2] != "at") throw ParseError(n, "expected 'at PRIME'");
            need_prime(toks[3]);
            a.refs = {toks[1], toks[3]};
        } else if (a.kind == "nzdtransport" || a.kind == "nonflat") {
            const RingMap& f = need_map(toks[1]);
            a.refs.push_back(toks[1]);
            size_t from = 0;
            std::string g = detail::paren_group(rest, from, n);
            a.polys.push_back(parse_poly(f.source().ambient(), g));
        } else if (a.kind == "image") {
            const RingMap& f = need_map(toks[1]);
            a.refs.push_back(toks[1]);
            size_t from = 0;
            std::string g = detail::paren_group(rest, from, n);
            a.polys.push_back(parse_poly(f.target().ambient(), g));
            a.numbers.push_back(trailing_int("bound"));
        } else if (a.kind == "saturation") {
            need_map(toks[1]);
            a.refs.push_back(toks[1]);
            if (toks[2] != "at") throw ParseError(n, "expected 'at PRIME'");
            need_prime(toks[3]);
            a.refs.push_back(toks[3]);
            a.numbers.push_back(trailing_int("bound"));
            for (size_t i = 0; i + 1 < toks.size(); ++i)
                if (toks[i] == "expect") a.expect = toks[i + 1];
            if (a.expect.empty()) throw ParseError(n, "expected 'expect equal|distinct|unknown'");
        } else if (a.kind == "effective" || a.kind == "subscheme") {
            const Module& M = need_module(toks[1]);
            a.refs.push_back(toks[1]);
            expected_after_eq(M.ring().ambient());
        } else if (a.kind == "nondegenerate") {
            const Module& M = need_module(toks[1]);
            a.refs.push_back(toks[1]);
            size_t from = 0;
            std::string g = detail::paren_group(rest, from, n);
            a.poly_groups.push_back(coords_group(M.ring().ambient(), g));
        } else if (a.kind == "sectionimage") {
            const Module& M = need_module(toks[1]);
            a.refs.push_back(toks[1]);
            size_t from = rest.find(toks[1]) + toks[1].size();
            std::string g = detail::paren_group(rest, from, n);
            a.poly_groups.push_back(coords_group(M.ring().ambient(), g));
            size_t eq = rest.find('=', from);
            if (eq == std::string::npos) throw ParseError(n, "expected '= (...)'");
            std::string g2 = detail::paren_group(rest, eq, n);
            a.poly_groups.push_back(parse_poly_list(M.ring().ambient(), g2, n));
        } else if (a.kind == "lineq") {
            need_module(toks[1]);
            need_module(toks[2]);
            a.refs = {toks[1], toks[2]};
            a.numbers.push_back(trailing_int("bound"));
            for (size_t i = 0; i + 1 < toks.size(); ++i)
                if (toks[i] == "expect") a.expect = toks[i + 1];
            if (a.expect.empty()) throw ParseError(n, "expected 'expect equivalent|not|unknown'");
        } else if (a.kind == "groupoid") {
            if (!doc_.actions.count(toks[1])) throw ParseError(n, "unknown action '" + toks[1] + "'");
            a.refs.push_back(toks[1]);
        } else if (a.kind == "cocycle" || a.kind == "stackdivisor") {
            need_equivariant(toks[1]);
            a.refs.push_back(toks[1]);
        } else if (a.kind == "invariants") {
            const EquivariantModule& E = need_equivariant(toks[1]);
            a.refs.push_back(toks[1]);
            a.numbers.push_back(trailing_int("bound"));
            size_t eq = rest.find('=');
            if (eq == std::string::npos) throw ParseError(n, "expected '= (...)'");
            std::string g = detail::paren_group(rest, eq, n);
            a.poly_groups.push_back(coords_group(E.groupoid.chart().ambient(), g));
        } else if (a.kind == "substack") {
            const EquivariantModule& E = need_equivariant(toks[1]);
            a.refs.push_back(toks[1]);
            expected_after_eq(E.groupoid.chart().ambient());
        } else if (a.kind == "stacksection") {
            const EquivariantModule& E = need_equivariant(toks[1]);
            a.refs.push_back(toks[1]);
            size_t from = rest.find(toks[1]) + toks[1].size();
            std::string g = detail::paren_group(rest, from, n);
            a.poly_groups.push_back(coords_group(E.groupoid.chart().ambient(), g));
            size_t eq = rest.find('=', from);
            if (eq == std::string::npos) throw ParseError(n, "expected '= (...)'");
            std::string g2 = detail::paren_group(rest, eq, n);
            a.poly_groups.push_back(parse_poly_list(E.groupoid.chart().ambient(), g2, n));
        } else {
            throw ParseError(n, "unknown assertion kind '" + a.kind + "'");
        }
        doc_.assertions.push_back(std::move(a));
    }

    Document doc_;
};

inline Document parse_document(const std::string& text) {
    return DocumentParser(text).parse();
}

} // namespace gendiv
