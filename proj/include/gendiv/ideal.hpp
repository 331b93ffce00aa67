#pragma once

#include "gendiv/module_gb.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gendiv {

// Ideal in an ambient polynomial ring, with an optional cached reduced
// Gröbner basis. Immutable after construction; the cache is filled at
// construction time only, so sharing across threads is safe.
class Ideal {
public:
    Ideal() = default;
    Ideal(PolyRing ambient, std::vector<Polynomial> gens)
        : ambient_(std::move(ambient)), gens_(std::move(gens)) {
        for (auto& g : gens_)
            if (g.ring() != ambient_) throw std::invalid_argument("generator outside ambient ring");
    }

    static Ideal zero(const PolyRing& r) { return Ideal(r, {}); }

    const PolyRing& ambient() const { return ambient_; }
    const std::vector<Polynomial>& gens() const { return gens_; }

    bool is_zero_ideal() const {
        for (auto& g : gens_)
            if (!g.is_zero()) return false;
        return true;
    }

    Ideal with_basis(const MonomialOrder& ord) const {
        Ideal r = *this;
        r.cached_ = groebner(ord);
        r.cached_ord_ = ord;
        return r;
    }

    std::vector<Polynomial> groebner(const MonomialOrder& ord = MonomialOrder::grevlex()) const {
        if (cached_ && same_order(ord)) return *cached_;
        ModuleGB gb(ambient_, 1, ModuleOrder{ord, 1 << 30}, true);
        std::vector<VecPoly> in;
        for (auto& g : gens_)
            if (!g.is_zero()) in.push_back({g});
        gb.compute(in);
        std::vector<Polynomial> out;
        for (auto& v : gb.basis()) out.push_back(v[0]);
        return out;
    }

private:
    bool same_order(const MonomialOrder& ord) const {
        return cached_ord_ && cached_ord_->kind() == ord.kind() &&
               cached_ord_->eliminated() == ord.eliminated();
    }

    PolyRing ambient_;
    std::vector<Polynomial> gens_;
    std::optional<std::vector<Polynomial>> cached_;
    std::optional<MonomialOrder> cached_ord_;
};

// basis is assumed to be a Gröbner basis for ord
inline Polynomial normal_form(const Polynomial& f, const std::vector<Polynomial>& basis,
                              const MonomialOrder& ord = MonomialOrder::grevlex()) {
    ModuleGB holder(f.ring(), 1, ModuleOrder{ord, 1 << 30}, true);
    std::vector<VecPoly> in;
    for (auto& g : basis)
        if (!g.is_zero()) in.push_back({g});
    holder.adopt_basis(in);
    return holder.reduce({f})[0];
}

inline std::vector<Polynomial> groebner_basis(const Ideal& I,
                                              const MonomialOrder& ord = MonomialOrder::grevlex()) {
    return I.groebner(ord);
}

inline bool is_member(const Polynomial& f, const Ideal& I,
                      const MonomialOrder& ord = MonomialOrder::grevlex()) {
    if (f.is_zero()) return true;
    return normal_form(f, I.groebner(ord), ord).is_zero();
}

inline bool is_proper(const Ideal& I) {
    auto gb = I.groebner();
    for (auto& g : gb)
        if (g.is_constant() && !g.is_zero()) return false;
    return true;
}

inline bool ideal_contains(const Ideal& I, const Ideal& J) {
    auto gb = I.groebner();
    for (auto& g : J.gens())
        if (!normal_form(g, gb).is_zero()) return false;
    return true;
}

inline bool ideal_equal(const Ideal& I, const Ideal& J) {
    return ideal_contains(I, J) && ideal_contains(J, I);
}

// ---- ring extension helpers ---------------------------------------------

inline PolyRing extend_ring(const PolyRing& r, const std::vector<std::string>& extra) {
    std::vector<std::string> vars = r.vars();
    vars.insert(vars.end(), extra.begin(), extra.end());
    return PolyRing(r.field(), vars);
}

// transport a polynomial into a ring whose variables contain the source's,
// mapping by name
inline Polynomial transport(const Polynomial& f, const PolyRing& target) {
    std::vector<int> map(f.ring().nvars(), -1);
    for (size_t i = 0; i < f.ring().nvars(); ++i)
        map[i] = target.var_index(f.ring().var(i));
    Polynomial out(target);
    for (auto& [e, c] : f.terms()) {
        Exps e2(target.nvars(), 0);
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (map[i] < 0)
                throw std::invalid_argument("transport: missing variable " + f.ring().var(i));
            e2[map[i]] = e[i];
        }
        out.add_term(e2, c);
    }
    return out;
}

// inverse of transport when f only involves variables of target
inline Polynomial restrict_to(const Polynomial& f, const PolyRing& target) {
    return transport(f, target);
}

// ---- elimination, intersection, quotient --------------------------------

// I ∩ k[vars not in eliminate_idx]
inline Ideal eliminate(const Ideal& I, const std::vector<int>& eliminate_idx) {
    MonomialOrder ord = MonomialOrder::elimination(eliminate_idx);
    auto gb = I.groebner(ord);
    std::vector<char> elim(I.ambient().nvars(), 0);
    for (int v : eliminate_idx) elim[v] = 1;
    std::vector<Polynomial> keep;
    for (auto& g : gb) {
        bool pure = true;
        for (int v : g.support_vars())
            if (elim[v]) { pure = false; break; }
        if (pure) keep.push_back(g);
    }
    return Ideal(I.ambient(), keep);
}

inline Ideal ideal_sum(const Ideal& I, const Ideal& J) {
    std::vector<Polynomial> gens = I.gens();
    gens.insert(gens.end(), J.gens().begin(), J.gens().end());
    return Ideal(I.ambient(), gens);
}

inline Ideal ideal_product(const Ideal& I, const Ideal& J) {
    std::vector<Polynomial> gens;
    for (auto& f : I.gens())
        for (auto& g : J.gens()) gens.push_back(f * g);
    return Ideal(I.ambient(), gens);
}

// I ∩ J via the tag-variable trick: eliminate t from t·I + (1−t)·J
inline Ideal ideal_intersect(const Ideal& I, const Ideal& J) {
    if (I.ambient() != J.ambient()) throw std::invalid_argument("ambient ring mismatch");
    const PolyRing& P = I.ambient();
    std::string tag = "t@";
    PolyRing E = extend_ring(P, {tag});
    int ti = E.var_index(tag);
    Polynomial t = Polynomial::variable(E, ti);
    Polynomial one = Polynomial::constant(E, 1);
    std::vector<Polynomial> gens;
    for (auto& f : I.gens()) gens.push_back(t * transport(f, E));
    for (auto& g : J.gens()) gens.push_back((one - t) * transport(g, E));
    Ideal big(E, gens);
    Ideal elim = eliminate(big, {ti});
    std::vector<Polynomial> out;
    for (auto& g : elim.gens()) out.push_back(restrict_to(g, P));
    return Ideal(P, out);
}

// exact division f / g, or nullopt when g does not divide f
inline std::optional<Polynomial> exact_divide(const Polynomial& f, const Polynomial& g) {
    if (g.is_zero()) return std::nullopt;
    if (f.is_zero()) return Polynomial::zero(f.ring());
    MonomialOrder ord = MonomialOrder::grevlex();
    auto [lge, lgc] = g.leading_term(ord);
    Polynomial rem = f;
    Polynomial quot(f.ring());
    const CoeffField& F = f.ring().field();
    while (!rem.is_zero()) {
        auto [le, lc] = rem.leading_term(ord);
        if (!exps_divides(lge, le)) return std::nullopt;
        Exps shift = exps_sub(le, lge);
        Rational c = F.div(lc, lgc);
        quot.add_term(shift, c);
        rem = rem - g.times_monomial(shift, c);
    }
    return quot;
}

// (I : f) = (1/f)·(I ∩ (f))
inline Ideal ideal_quotient_single(const Ideal& I, const Polynomial& f) {
    const PolyRing& P = I.ambient();
    if (f.is_zero()) return Ideal(P, {Polynomial::constant(P, 1)});
    Ideal inter = ideal_intersect(I, Ideal(P, {f}));
    std::vector<Polynomial> out;
    for (auto& g : inter.groebner()) {
        auto q = exact_divide(g, f);
        if (!q) throw std::logic_error("ideal_quotient: division failed on intersection element");
        out.push_back(*q);
    }
    return Ideal(P, out);
}

// (I : J) = ∩_j (I : g_j)
inline Ideal ideal_quotient(const Ideal& I, const Ideal& J) {
    if (I.ambient() != J.ambient()) throw std::invalid_argument("ambient ring mismatch");
    const PolyRing& P = I.ambient();
    std::optional<Ideal> acc;
    for (auto& g : J.gens()) {
        if (g.is_zero()) continue;
        Ideal q = ideal_quotient_single(I, g);
        acc = acc ? ideal_intersect(*acc, q) : q;
    }
    if (!acc) return Ideal(P, {Polynomial::constant(P, 1)}); // J = 0
    return Ideal(P, acc->groebner());
}

// ---- dimension -----------------------------------------------------------

// Krull dimension of P/I via maximal independent variable sets modulo in(I).
inline int krull_dimension(const Ideal& I) {
    auto gb = I.groebner();
    for (auto& g : gb)
        if (g.is_constant() && !g.is_zero())
            throw std::invalid_argument("krull_dimension: unit ideal");
    std::vector<Exps> lts;
    MonomialOrder ord = MonomialOrder::grevlex();
    for (auto& g : gb) lts.push_back(g.leading_term(ord).first);
    size_t n = I.ambient().nvars();
    int best = 0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        int size = 0;
        for (size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) ++size;
        if (size <= best) continue;
        bool independent = true;
        for (auto& e : lts) {
            bool inside = true;
            for (size_t i = 0; i < n; ++i)
                if (e[i] > 0 && !(mask & (1u << i))) { inside = false; break; }
            if (inside) { independent = false; break; }
        }
        if (independent) best = size;
    }
    return best;
}

// ---- gcd via the lcm/intersection trick ----------------------------------

inline Polynomial normalize_leading(const Polynomial& f) {
    return f.is_zero() ? f : f.monic(MonomialOrder::grevlex());
}

inline Polynomial poly_gcd(const Polynomial& f, const Polynomial& g) {
    if (f.is_zero()) return normalize_leading(g);
    if (g.is_zero()) return normalize_leading(f);
    Ideal inter = ideal_intersect(Ideal(f.ring(), {f}), Ideal(g.ring(), {g}));
    auto basis = inter.groebner();
    if (basis.size() != 1)
        throw std::logic_error("poly_gcd: intersection of principal ideals not principal");
    auto q = exact_divide(f * g, basis[0]);
    if (!q) throw std::logic_error("poly_gcd: lcm does not divide product");
    return normalize_leading(*q);
}

// square-free part f / gcd(f, ∂f/∂x1, ..., ∂f/∂xn)
inline Polynomial squarefree_part(const Polynomial& f) {
    if (f.is_zero() || f.is_constant()) return f;
    Polynomial g = f;
    for (size_t i = 0; i < f.ring().nvars(); ++i) g = poly_gcd(g, f.derivative(i));
    auto q = exact_divide(f, g);
    if (!q) throw std::logic_error("squarefree_part: gcd does not divide input");
    return normalize_leading(*q);
}

} // namespace gendiv
