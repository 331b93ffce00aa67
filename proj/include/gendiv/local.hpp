#pragma once

#include "gendiv/fpmodule.hpp"

namespace gendiv {

struct ZeroLocalization : std::runtime_error {
    explicit ZeroLocalization(const std::string& msg) : std::runtime_error(msg) {}
};

// dim A_p = max over minimal primes q ⊆ p of (dim P/q − dim P/p);
// affine algebras are catenary, so this equals the height of p in A.
inline int local_dim(const QuotientRing& A, const PrimeIdeal& p,
                     const std::vector<PrimeIdeal>& declared_components = {}) {
    require_prime_of(A, p);
    int dim_p = krull_dimension(p.ideal);
    int best = -1;
    for (auto& q : ring_minimal_primes(A, declared_components)) {
        if (!ideal_contains(p.ideal, q.ideal)) continue;
        best = std::max(best, krull_dimension(q.ideal) - dim_p);
    }
    if (best < 0)
        throw std::invalid_argument("local_dim: prime contains no minimal prime of the ring");
    return best;
}

inline Module cyclic_by_prime(const QuotientRing& A, const PrimeIdeal& p) {
    return Module::quotient_by(A, p.ideal.groebner());
}

inline bool ideal_inside_prime(const Ideal& I, const PrimeIdeal& p) {
    auto pgb = p.ideal.groebner();
    for (auto& g : I.gens())
        if (!normal_form(g, pgb).is_zero()) return false;
    return true;
}

// depth M_p = min { i : Ext^i(A/p, M) localizes nonzero at p }, where
// nonzero at p means Ann(Ext^i) ⊆ p.
inline int local_depth(const Module& M, const PrimeIdeal& p) {
    const QuotientRing& A = M.ring();
    require_prime_of(A, p);
    if (!ideal_inside_prime(fitting_ideal(M, 0), p))
        throw ZeroLocalization("local_depth: module localizes to zero at the prime");
    Module residue = cyclic_by_prime(A, p);
    size_t cap = A.nvars() + 2;
    for (size_t i = 0; i < cap; ++i) {
        Module e = ext_module(i, residue, M);
        Ideal ann = module_annihilator(e);
        if (ideal_inside_prime(ann, p)) return static_cast<int>(i);
    }
    throw std::logic_error("local_depth: no nonvanishing Ext up to the variable-count bound");
}

// Gorenstein at p: with n = dim A_p, Ext^i(A/p, A) localizes to zero for
// i < n and has kappa(p)-rank one for i = n.
inline bool is_gorenstein_at(const QuotientRing& A, const PrimeIdeal& p,
                             const std::vector<PrimeIdeal>& declared_components = {}) {
    int n = local_dim(A, p, declared_components);
    Module residue = cyclic_by_prime(A, p);
    Module free1 = Module::free(A, 1);
    for (int i = 0; i < n; ++i) {
        Module e = ext_module(static_cast<size_t>(i), residue, free1);
        if (ideal_inside_prime(module_annihilator(e), p)) return false; // nonzero below n
    }
    Module top = ext_module(static_cast<size_t>(n), residue, free1);
    if (!ideal_inside_prime(module_annihilator(top), p)) return false; // zero at n
    return kappa_rank_at(top, p) == 1;
}

// ---- condition reports -------------------------------------------------------

enum class ConditionKind { Gr, Sr };
enum class Verdict { Pass, Fail, Partial };

struct PrimeCheck {
    PrimeIdeal prime;
    int dim = 0;
    int depth = -1;            // Sr only
    bool gorenstein = true;    // Gr only (true when dim > r: not checked)
    bool checked = true;       // Gr: dim ≤ r
    bool ok = true;
};

struct ConditionReport {
    std::string subject;
    ConditionKind kind;
    int r = 0;
    std::vector<PrimeCheck> checks;
    Verdict verdict = Verdict::Partial;
    std::optional<size_t> witness; // failing check index
    bool exhaustive = false;
    std::string note;
};

// Per-prime G_r / S_r checks. PASS requires the caller-certified
// exhaustiveness flag; it is honored only when the supplied primes contain
// every computable minimal prime of the ring.
inline ConditionReport condition_report(const QuotientRing& A, const std::optional<Module>& module,
                                        ConditionKind kind, int r,
                                        const std::vector<PrimeIdeal>& primes, bool exhaustive,
                                        const std::string& subject_name = "") {
    if (primes.empty()) throw std::invalid_argument("condition_report: no primes supplied");
    ConditionReport rep;
    rep.subject = subject_name.empty() ? A.to_string() : subject_name;
    rep.kind = kind;
    rep.r = r;
    Module M = module ? *module : Module::free(A, 1);
    bool all_ok = true;
    for (auto& p : primes) {
        PrimeCheck c;
        c.prime = p;
        c.dim = local_dim(A, p);
        if (kind == ConditionKind::Gr) {
            if (c.dim <= r) {
                c.gorenstein = is_gorenstein_at(A, p);
                c.ok = c.gorenstein;
            } else {
                c.checked = false;
                c.ok = true;
            }
        } else {
            bool localizes = ideal_inside_prime(fitting_ideal(M, 0), p);
            if (!localizes) {
                c.checked = false; // vacuous: M_p = 0
                c.ok = true;
            } else {
                c.depth = local_depth(M, p);
                c.ok = c.depth >= std::min(r, c.dim);
            }
        }
        if (!c.ok && !rep.witness) rep.witness = rep.checks.size();
        all_ok = all_ok && c.ok;
        rep.checks.push_back(std::move(c));
    }
    bool exhaustiveness_ok = false;
    if (exhaustive) {
        exhaustiveness_ok = true;
        try {
            for (auto& q : ring_minimal_primes(A)) {
                bool found = false;
                for (auto& p : primes)
                    if (ideal_equal(p.ideal, q.ideal)) found = true;
                if (!found) exhaustiveness_ok = false;
            }
        } catch (const UnsupportedIdealClass&) {
            exhaustiveness_ok = false;
        }
        if (!exhaustiveness_ok)
            rep.note = "exhaustiveness flag rejected: supplied primes miss a minimal prime";
    }
    rep.exhaustive = exhaustive && exhaustiveness_ok;
    rep.verdict = !all_ok ? Verdict::Fail : (rep.exhaustive ? Verdict::Pass : Verdict::Partial);
    return rep;
}

// ---- associated primes -------------------------------------------------------

// M viewed as a module over the ambient polynomial ring
inline Module as_ambient_module(const Module& M) {
    const QuotientRing& A = M.ring();
    QuotientRing P0 = QuotientRing::polynomial_ring(A.ambient());
    std::vector<std::vector<Polynomial>> cols = M.rel().columns();
    for (auto& rel : A.relation_basis())
        for (size_t i = 0; i < M.gens(); ++i)
            cols.push_back(vec_unit(A.ambient(), M.gens(), i, rel));
    return Module(P0, M.gens(), PolyMatrix::from_columns(A.ambient(), M.gens(), cols));
}

// p ∈ Ass(M) iff Hom(A/p, M) localizes nonzero at p
inline bool is_associated_prime(const Module& M, const PrimeIdeal& p) {
    const QuotientRing& A = M.ring();
    auto pg = p.ideal.groebner();
    // kernel of M -> M^{|p|}, v ↦ (g·v)_g
    size_t s = pg.size();
    if (s == 0) {
        // zero prime in a domain: associated iff M is faithful, Ann(M) = 0
        return module_annihilator(M).is_zero_ideal();
    }
    PolyMatrix F(A.ambient(), s * M.gens(), M.gens());
    for (size_t k = 0; k < s; ++k)
        for (size_t i = 0; i < M.gens(); ++i) F.at(k * M.gens() + i, i) = pg[k];
    PolyMatrix target_rel(A.ambient(), s * M.gens(), s * M.rel().cols());
    for (size_t k = 0; k < s; ++k)
        for (size_t i = 0; i < M.gens(); ++i)
            for (size_t c = 0; c < M.rel().cols(); ++c)
                target_rel.at(k * M.gens() + i, k * M.rel().cols() + c) = M.rel().at(i, c);
    Module target(A, s * M.gens(), target_rel);
    Module H = homology_at(A, M.gens(), M.rel(), F, target.gens(), target.rel(), {});
    if (H.is_zero_module()) return false;
    return ideal_inside_prime(module_annihilator(H), p);
}

// candidate generation via Ext over the ambient polynomial ring
inline std::vector<PrimeIdeal> associated_prime_candidates(const Module& M) {
    Module amb = as_ambient_module(M);
    const QuotientRing& P0 = amb.ring();
    std::vector<PrimeIdeal> candidates;
    std::set<std::string> seen;
    for (size_t i = 0; i <= P0.nvars(); ++i) {
        Module e = ext_module(i, amb, Module::free(P0, 1));
        if (e.is_zero_module()) continue;
        Ideal ann = module_annihilator(e);
        for (auto& q : minimal_primes(ann)) {
            std::string key = ideal_key(q.ideal);
            if (seen.insert(key).second) candidates.push_back(q);
        }
    }
    return candidates;
}

inline std::vector<PrimeIdeal> associated_primes(const Module& M,
                                                 const std::vector<PrimeIdeal>& candidates = {}) {
    std::vector<PrimeIdeal> cands = candidates;
    if (cands.empty()) cands = associated_prime_candidates(M);
    std::vector<PrimeIdeal> out;
    for (auto& p : cands)
        if (is_associated_prime(M, p)) out.push_back(p);
    return out;
}

struct EmbeddedPointReport {
    bool has_embedded = false;
    std::optional<PrimeIdeal> witness;
    std::vector<PrimeIdeal> associated;
    std::vector<PrimeIdeal> support_minimal;
};

inline EmbeddedPointReport has_embedded_points(const Module& M,
                                               const std::vector<PrimeIdeal>& candidates = {}) {
    EmbeddedPointReport rep;
    if (M.is_zero_module()) return rep;
    rep.associated = associated_primes(M, candidates);
    rep.support_minimal = minimal_primes(module_annihilator(M));
    for (auto& p : rep.associated) {
        bool minimal_in_support = false;
        for (auto& q : rep.support_minimal)
            if (ideal_equal(p.ideal, q.ideal)) minimal_in_support = true;
        if (!minimal_in_support) {
            rep.has_embedded = true;
            rep.witness = p;
            break;
        }
    }
    return rep;
}

// ---- total quotient decomposition --------------------------------------------

struct TotalQuotientEntry {
    PrimeIdeal eta;
    bool field_descriptor;        // true: Frac(P/eta); false: symbolic localization
    QuotientRing component;       // P/eta when field_descriptor, else the ring itself
};

struct TotalQuotientDecomposition {
    bool reduced = false;
    std::vector<TotalQuotientEntry> entries;
};

inline TotalQuotientDecomposition total_quotient_decomposition(
    const QuotientRing& A, const std::vector<PrimeIdeal>& declared_components = {}) {
    // S_1 precondition: no embedded primes of (0)
    EmbeddedPointReport emb = has_embedded_points(Module::free(A, 1));
    if (emb.has_embedded)
        throw UnsupportedIdealClass("total quotient decomposition requires no embedded primes of (0)");
    auto etas = ring_minimal_primes(A, declared_components);
    // reduced iff the relations equal the intersection of the minimal primes
    std::optional<Ideal> inter;
    for (auto& eta : etas)
        inter = inter ? ideal_intersect(*inter, eta.ideal) : eta.ideal;
    bool reduced = inter && ideal_equal(*inter, A.relations());
    TotalQuotientDecomposition out;
    out.reduced = reduced;
    for (auto& eta : etas) {
        TotalQuotientEntry e{eta, reduced,
                             reduced ? QuotientRing(A.ambient(), eta.ideal) : A};
        out.entries.push_back(std::move(e));
    }
    return out;
}

} // namespace gendiv
