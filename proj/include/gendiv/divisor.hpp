#pragma once

#include "gendiv/local.hpp"

namespace gendiv {

struct NotReflexive : std::runtime_error {
    explicit NotReflexive(const std::string& msg) : std::runtime_error(msg) {}
};
struct WrongGenericRank : std::runtime_error {
    explicit WrongGenericRank(const std::string& msg) : std::runtime_error(msg) {}
};
struct Degenerate : std::runtime_error {
    explicit Degenerate(const std::string& msg) : std::runtime_error(msg) {}
};
struct EmbeddedPoint : std::runtime_error {
    explicit EmbeddedPoint(const std::string& msg) : std::runtime_error(msg) {}
};
struct DegenerateSection : std::runtime_error {
    explicit DegenerateSection(const std::string& msg) : std::runtime_error(msg) {}
};

// Effective realization of a divisor: an embedding of the ideal side into
// the structure sheaf, given by evaluation at an element of F.
struct EffectiveData {
    std::vector<Polynomial> at_element; // coordinates in F of the evaluation point
    std::vector<Polynomial> image_gens; // generators of the image ideal
    Ideal image;                        // the ideal they generate (relations folded)
};

// Generalized divisor on an affine chart: a reflexive module F, locally free
// of rank one at every generic point, together with its dual I and the
// certificates that witness both conditions.
struct GeneralizedDivisor {
    Module F;
    HomModule I; // dual(F), evaluation data retained
    ReflexivityCert reflexivity;
    std::vector<std::pair<PrimeIdeal, bool>> rank_checks;
    std::optional<EffectiveData> effective;
};

inline std::vector<PrimeIdeal> generic_points(const QuotientRing& A,
                                              const std::vector<PrimeIdeal>& declared = {}) {
    return ring_minimal_primes(A, declared);
}

inline GeneralizedDivisor validate_divisor(const Module& F,
                                           const std::vector<PrimeIdeal>& declared = {}) {
    GeneralizedDivisor D;
    D.F = F;
    D.reflexivity = is_reflexive(F);
    if (!D.reflexivity.reflexive)
        throw NotReflexive("validate_divisor: module is not reflexive: " +
                           D.reflexivity.verdict.to_string());
    for (auto& eta : generic_points(F.ring(), declared)) {
        bool ok = localize_is_free_rank_one(F, eta);
        D.rank_checks.emplace_back(eta, ok);
        if (!ok)
            throw WrongGenericRank("validate_divisor: not free of rank one at generic point (" +
                                   ideal_key(eta.ideal) + ")");
    }
    D.I = dual(F);
    return D;
}

// evaluation of the dual module at an element of F, as a map I -> A
inline PolyMatrix evaluation_row(const HomModule& I, const std::vector<Polynomial>& coords) {
    const QuotientRing& A = I.source.ring();
    PolyMatrix row(A.ambient(), 1, I.module.gens());
    for (size_t i = 0; i < I.module.gens(); ++i) {
        Polynomial v(A.ambient());
        for (size_t j = 0; j < I.source.gens(); ++j)
            v = v + I.gen_maps[i].at(0, j) * coords[j];
        row.at(0, i) = A.reduce(v);
    }
    return row;
}

// deterministic candidate elements of F for the effectivity search:
// generators, ±1 pairs, the all-ones combination, then variable multiples
inline std::vector<std::vector<Polynomial>> effectivity_candidates(const Module& F) {
    const PolyRing& P = F.ring().ambient();
    std::vector<std::vector<Polynomial>> out;
    auto unit = [&](size_t i) {
        std::vector<Polynomial> v(F.gens(), Polynomial::zero(P));
        v[i] = Polynomial::constant(P, 1);
        return v;
    };
    for (size_t i = 0; i < F.gens(); ++i) out.push_back(unit(i));
    for (size_t i = 0; i < F.gens(); ++i)
        for (size_t j = i + 1; j < F.gens(); ++j) {
            auto v = unit(i);
            v[j] = Polynomial::constant(P, 1);
            out.push_back(v);
            v[j] = Polynomial::constant(P, -1);
            out.push_back(v);
        }
    if (F.gens() > 2) {
        std::vector<Polynomial> all(F.gens(), Polynomial::constant(P, 1));
        out.push_back(all);
    }
    for (size_t k = 0; k < P.nvars(); ++k)
        for (size_t i = 0; i < F.gens(); ++i) {
            std::vector<Polynomial> v(F.gens(), Polynomial::zero(P));
            v[i] = Polynomial::variable(P, k);
            out.push_back(v);
        }
    return out;
}

inline bool evaluation_injective(const HomModule& I, const PolyMatrix& row) {
    Module free1 = Module::free(I.module.ring(), 1);
    auto K = kernel_preimage_gens(I.module, free1, row);
    ASolver rels = I.module.relation_solver();
    for (auto& k : K)
        if (!rels.contains(k)) return false;
    return true;
}

// searches the canonical evaluation data for an embedding of I into the
// free rank-one module; fills in the effective realization when found
inline bool is_effective(GeneralizedDivisor& D) {
    if (D.effective) return true;
    const QuotientRing& A = D.F.ring();
    for (auto& coords : effectivity_candidates(D.F)) {
        PolyMatrix row = evaluation_row(D.I, coords);
        bool zero = true;
        for (size_t i = 0; i < row.cols(); ++i)
            if (!row.at(0, i).is_zero()) zero = false;
        if (zero && D.I.module.gens() > 0) continue;
        if (!evaluation_injective(D.I, row)) continue;
        EffectiveData eff;
        eff.at_element = coords;
        for (size_t i = 0; i < row.cols(); ++i) eff.image_gens.push_back(row.at(0, i));
        std::vector<Polynomial> gens = eff.image_gens;
        for (auto& g : A.relations().gens()) gens.push_back(g);
        eff.image = Ideal(A.ambient(), Ideal(A.ambient(), gens).groebner());
        D.effective = std::move(eff);
        return true;
    }
    return false;
}

// the closed subscheme cut out by an effective divisor, certified to have
// no embedded points and codimension-one support
struct SubschemeReport {
    Ideal ideal;
    bool empty = false;
    EmbeddedPointReport embedded;
    int ring_dim = 0;
    int subscheme_dim = -1; // -1 for the empty subscheme
    std::vector<std::pair<PrimeIdeal, bool>> avoids_generic_points;
};

inline SubschemeReport effective_to_subscheme(GeneralizedDivisor& D,
                                              const std::vector<PrimeIdeal>& declared = {}) {
    if (!is_effective(D))
        throw std::invalid_argument("effective_to_subscheme: divisor has no effective realization");
    const QuotientRing& A = D.F.ring();
    SubschemeReport rep;
    rep.ideal = D.effective->image;
    rep.ring_dim = krull_dimension(A.relations());
    bool unit = !is_proper(rep.ideal);
    rep.empty = unit;
    if (!unit) {
        Module quotient = Module::quotient_by(A, rep.ideal.gens());
        rep.embedded = has_embedded_points(quotient);
        if (rep.embedded.has_embedded)
            throw EmbeddedPoint("effective_to_subscheme: embedded point at (" +
                                ideal_key(rep.embedded.witness->ideal) + ")");
        rep.subscheme_dim = krull_dimension(rep.ideal);
    }
    for (auto& eta : generic_points(A, declared)) {
        bool avoids = !ideal_inside_prime(rep.ideal, eta);
        rep.avoids_generic_points.emplace_back(eta, avoids);
        if (!avoids)
            throw Degenerate("effective_to_subscheme: divisor contains generic point (" +
                             ideal_key(eta.ideal) + ")");
    }
    return rep;
}

// ---- fractional ideals ---------------------------------------------------------

// Finitely generated submodule (1/denominator)·(numerators) of the total
// quotient ring. The denominator must be a nonzerodivisor.
struct FractionalIdeal {
    QuotientRing ring;
    std::vector<Polynomial> numerators;
    Polynomial denominator;

    FractionalIdeal(QuotientRing A, std::vector<Polynomial> nums, Polynomial den)
        : ring(std::move(A)), numerators(std::move(nums)), denominator(ring.reduce(den)) {
        if (!is_nonzerodivisor(denominator, ring))
            throw std::invalid_argument("fractional ideal denominator is a zerodivisor");
        for (auto& n : numerators) n = ring.reduce(n);
    }

    Module as_module() const { return Module::from_ideal(ring, numerators); }
};

// a nonzerodivisor inside the numerator ideal, found by a deterministic
// small-combination search
inline Polynomial nonzerodivisor_in(const QuotientRing& A, const std::vector<Polynomial>& gens) {
    for (auto& g : gens)
        if (is_nonzerodivisor(g, A)) return g;
    for (size_t i = 0; i < gens.size(); ++i)
        for (size_t j = i + 1; j < gens.size(); ++j) {
            Polynomial s = A.reduce(gens[i] + gens[j]);
            if (is_nonzerodivisor(s, A)) return s;
            s = A.reduce(gens[i] - gens[j]);
            if (is_nonzerodivisor(s, A)) return s;
        }
    for (long long c = 2; c <= 3; ++c) {
        Polynomial s(A.ambient());
        for (size_t i = 0; i < gens.size(); ++i)
            s = s + gens[i].scaled(Rational(Integer(1 + static_cast<long long>(i) * (c - 1))));
        s = A.reduce(s);
        if (is_nonzerodivisor(s, A)) return s;
    }
    throw Degenerate("no nonzerodivisor found in the numerator ideal");
}

inline void require_nondegenerate(const FractionalIdeal& I,
                                  const std::vector<PrimeIdeal>& declared = {}) {
    Ideal N(I.ring.ambient(), I.numerators);
    for (auto& eta : generic_points(I.ring, declared)) {
        if (ideal_inside_prime(N, eta))
            throw Degenerate("fractional ideal degenerate at generic point (" +
                             ideal_key(eta.ideal) + ")");
    }
}

struct FractionalInverse {
    FractionalIdeal inverse;
    IsoVerdict dual_comparison; // canonical map inverse -> dual(I) is an isomorphism
};

// I^{-1} = {f in K : f·I ⊆ O} = (d/u)·(uA : N) for any nonzerodivisor u in N
inline FractionalInverse fractional_inverse(const FractionalIdeal& I,
                                            const std::vector<PrimeIdeal>& declared = {}) {
    require_nondegenerate(I, declared);
    const QuotientRing& A = I.ring;
    const PolyRing& P = A.ambient();
    Polynomial u = nonzerodivisor_in(A, I.numerators);
    std::vector<Polynomial> ugens = {u};
    for (auto& g : A.relations().gens()) ugens.push_back(g);
    std::vector<Polynomial> ngens = I.numerators;
    for (auto& g : A.relations().gens()) ngens.push_back(g);
    Ideal colon = ideal_quotient(Ideal(P, ugens), Ideal(P, ngens));
    std::vector<Polynomial> qgens;
    for (auto& g : colon.groebner()) {
        Polynomial r = A.reduce(g);
        if (!r.is_zero()) qgens.push_back(r);
    }
    std::vector<Polynomial> inv_nums;
    for (auto& g : qgens) inv_nums.push_back(A.reduce(g * I.denominator));
    FractionalInverse out{FractionalIdeal(A, inv_nums, u), IsoVerdict{}};

    // canonical comparison: generator q_k of I^{-1} acts on I by
    // (d·q_k/u)·(n_j/d) = q_k·n_j/u, which lies in A
    Module MI = I.as_module();
    HomModule DI = dual(MI);
    Module Minv = Module::from_ideal(A, out.inverse.numerators);
    ASolver udiv(A, 1, {{u}});
    std::vector<std::vector<Polynomial>> dual_cols;
    for (auto& psi : DI.gen_maps) {
        std::vector<Polynomial> col;
        for (size_t j = 0; j < MI.gens(); ++j) col.push_back(psi.at(0, j));
        dual_cols.push_back(col);
    }
    ASolver dual_span(A, MI.gens(), dual_cols);
    PolyMatrix cmp(P, DI.module.gens(), Minv.gens());
    for (size_t k = 0; k < Minv.gens(); ++k) {
        std::vector<Polynomial> row;
        for (size_t j = 0; j < MI.gens(); ++j) {
            auto cof = udiv.lift({A.reduce(qgens[k] * I.numerators[j])});
            if (!cof) throw std::logic_error("fractional_inverse: division by u failed");
            row.push_back((*cof)[0]);
        }
        auto lifted = dual_span.lift(row);
        if (!lifted) throw std::logic_error("fractional_inverse: functional failed to lift");
        for (size_t m = 0; m < DI.module.gens(); ++m) cmp.at(m, k) = (*lifted)[m];
    }
    out.dual_comparison = is_iso(ModuleMap(Minv, DI.module, cmp));
    return out;
}

// ---- sections and linear systems ------------------------------------------------

// s generates the stalk of F at every generic point: the cokernel of
// s : A -> F localizes to zero there
inline bool nondegenerate_section(const Module& F, const std::vector<Polynomial>& coords,
                                  const std::vector<PrimeIdeal>& declared = {}) {
    const QuotientRing& A = F.ring();
    std::vector<std::vector<Polynomial>> cols = F.rel().columns();
    cols.push_back(coords);
    Module coker(A, F.gens(), PolyMatrix::from_columns(A.ambient(), F.gens(), cols));
    Ideal ann = module_annihilator(coker);
    for (auto& eta : generic_points(A, declared))
        if (ideal_inside_prime(ann, eta)) return false;
    return true;
}

// dualize a nondegenerate section into an effective divisor in the same class
inline GeneralizedDivisor section_to_effective(const GeneralizedDivisor& D,
                                               const std::vector<Polynomial>& coords,
                                               const std::vector<PrimeIdeal>& declared = {}) {
    if (!nondegenerate_section(D.F, coords, declared))
        throw DegenerateSection("section does not generate the stalks at the generic points");
    const QuotientRing& A = D.F.ring();
    PolyMatrix row = evaluation_row(D.I, coords);
    if (!evaluation_injective(D.I, row))
        throw std::logic_error("section_to_effective: evaluation failed to embed the dual");
    GeneralizedDivisor out = D;
    EffectiveData eff;
    eff.at_element = coords;
    for (size_t i = 0; i < row.cols(); ++i) eff.image_gens.push_back(row.at(0, i));
    std::vector<Polynomial> gens = eff.image_gens;
    for (auto& g : A.relations().gens()) gens.push_back(g);
    eff.image = Ideal(A.ambient(), Ideal(A.ambient(), gens).groebner());
    out.effective = std::move(eff);
    return out;
}

// ---- linear equivalence ----------------------------------------------------------

enum class EquivalenceVerdict { Equivalent, Not, Unknown };

struct EquivalenceReport {
    EquivalenceVerdict verdict = EquivalenceVerdict::Unknown;
    std::optional<PolyMatrix> forward;  // F1 -> F2
    std::optional<PolyMatrix> backward; // F2 -> F1
    std::optional<PrimeIdeal> obstruction;
    size_t mu1 = 0, mu2 = 0; // separating local generator counts at the obstruction
};

inline size_t local_generator_count(const Module& M, const PrimeIdeal& p) {
    auto gb = p.ideal.groebner();
    for (size_t i = 0; i <= M.gens(); ++i) {
        Ideal fi = fitting_ideal(M, i);
        for (auto& g : fi.gens())
            if (!normal_form(g, gb).is_zero()) return i;
    }
    return M.gens();
}

inline EquivalenceReport linear_equivalence(const GeneralizedDivisor& D1,
                                            const GeneralizedDivisor& D2, int search_bound) {
    const QuotientRing& A = D1.F.ring();
    if (A != D2.F.ring()) throw std::invalid_argument("linear_equivalence: ring mismatch");
    const PolyRing& P = A.ambient();
    EquivalenceReport rep;

    HomModule H12 = hom_module(D1.F, D2.F);
    // candidate maps: identity shape, single generators, ±1 pairs, then
    // degree-one monomial multiples of single generators
    std::vector<PolyMatrix> candidates;
    if (D1.F.gens() == D2.F.gens()) candidates.push_back(PolyMatrix::identity(P, D1.F.gens()));
    for (auto& g : H12.gen_maps) candidates.push_back(g);
    for (size_t i = 0; i < H12.gen_maps.size(); ++i)
        for (size_t j = i + 1; j < H12.gen_maps.size(); ++j) {
            PolyMatrix sum(P, D2.F.gens(), D1.F.gens());
            for (size_t r = 0; r < sum.rows(); ++r)
                for (size_t c = 0; c < sum.cols(); ++c)
                    sum.at(r, c) = H12.gen_maps[i].at(r, c) + H12.gen_maps[j].at(r, c);
            candidates.push_back(sum);
            candidates.push_back(H12.gen_maps[i].sub(H12.gen_maps[j]));
        }
    if (search_bound >= 1) {
        for (size_t k = 0; k < P.nvars(); ++k)
            for (auto& g : H12.gen_maps) {
                PolyMatrix scaled(P, g.rows(), g.cols());
                Polynomial v = Polynomial::variable(P, k);
                for (size_t r = 0; r < g.rows(); ++r)
                    for (size_t c = 0; c < g.cols(); ++c) scaled.at(r, c) = g.at(r, c) * v;
                candidates.push_back(scaled);
            }
    }

    for (auto& mat : candidates) {
        std::optional<ModuleMap> phi;
        try {
            phi = ModuleMap(D1.F, D2.F, mat);
        } catch (const std::invalid_argument&) {
            continue; // not well-defined
        }
        if (!is_iso(*phi).iso) continue;
        // recover the inverse by lifting target generators through phi
        std::vector<std::vector<Polynomial>> cols = mat.columns();
        for (auto& c : D2.F.rel().columns()) cols.push_back(c);
        ASolver solver(A, D2.F.gens(), cols);
        PolyMatrix psi(P, D1.F.gens(), D2.F.gens());
        bool ok = true;
        for (size_t j = 0; j < D2.F.gens() && ok; ++j) {
            std::vector<Polynomial> e(D2.F.gens(), Polynomial::zero(P));
            e[j] = Polynomial::constant(P, 1);
            auto cof = solver.lift(e);
            if (!cof) { ok = false; break; }
            for (size_t i = 0; i < D1.F.gens(); ++i) psi.at(i, j) = (*cof)[i];
        }
        if (!ok) continue;
        rep.verdict = EquivalenceVerdict::Equivalent;
        rep.forward = mat;
        rep.backward = psi;
        return rep;
    }

    // separating invariant: local minimal generator counts at candidate primes
    std::vector<PrimeIdeal> primes = generic_points(A);
    for (auto& M : {D1.F, D2.F}) {
        for (size_t i = 0; i < M.gens(); ++i) {
            try {
                Ideal fi = fitting_ideal(M, i);
                if (!is_proper(fi)) continue;
                for (auto& q : minimal_primes(fi)) {
                    bool seen = false;
                    for (auto& p : primes)
                        if (ideal_equal(p.ideal, q.ideal)) seen = true;
                    if (!seen) primes.push_back(q);
                }
            } catch (const UnsupportedIdealClass&) {
                continue;
            }
        }
    }
    for (auto& p : primes) {
        size_t m1 = local_generator_count(D1.F, p);
        size_t m2 = local_generator_count(D2.F, p);
        if (m1 != m2) {
            rep.verdict = EquivalenceVerdict::Not;
            rep.obstruction = p;
            rep.mu1 = m1;
            rep.mu2 = m2;
            return rep;
        }
    }
    rep.verdict = EquivalenceVerdict::Unknown;
    return rep;
}

} // namespace gendiv
