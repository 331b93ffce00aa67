#pragma once

#include "gendiv/polynomial.hpp"

#include <optional>
#include <tuple>
#include <vector>

namespace gendiv {

// Element of a free module P^n, dense by component.
using VecPoly = std::vector<Polynomial>;

inline VecPoly vec_zero(const PolyRing& r, size_t n) {
    return VecPoly(n, Polynomial::zero(r));
}

inline bool vec_is_zero(const VecPoly& v) {
    for (auto& p : v)
        if (!p.is_zero()) return false;
    return true;
}

inline VecPoly vec_sub(const VecPoly& a, const VecPoly& b) {
    VecPoly r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] = r[i] - b[i];
    return r;
}

inline VecPoly vec_unit(const PolyRing& r, size_t n, size_t i, const Polynomial& p) {
    VecPoly v = vec_zero(r, n);
    v[i] = p;
    return v;
}

struct ModTerm {
    int comp;
    Exps e;
    Rational c;
};

// Order on module monomials (comp, e): components below `split` dominate
// those at or above it; within a block the ring order decides, with the
// smaller component winning ties (term-over-position).
struct ModuleOrder {
    MonomialOrder ring_ord = MonomialOrder::grevlex();
    int split = 1 << 30;

    int compare(int c1, const Exps& e1, int c2, const Exps& e2) const {
        int b1 = c1 < split ? 0 : 1;
        int b2 = c2 < split ? 0 : 1;
        if (b1 != b2) return b1 < b2 ? 1 : -1;
        int c = ring_ord.compare(e1, e2);
        if (c != 0) return c;
        if (c1 != c2) return c1 < c2 ? 1 : -1;
        return 0;
    }
};

inline std::optional<ModTerm> vec_leading_term(const VecPoly& v, const ModuleOrder& ord) {
    std::optional<ModTerm> best;
    for (size_t i = 0; i < v.size(); ++i) {
        for (auto& [e, c] : v[i].terms()) {
            if (!best || ord.compare(static_cast<int>(i), e, best->comp, best->e) > 0)
                best = ModTerm{static_cast<int>(i), e, c};
        }
    }
    return best;
}

// Gröbner machinery for submodules of free modules over a polynomial ring.
// rank_one enables Buchberger's product criterion (valid for ideals only).
class ModuleGB {
public:
    ModuleGB(const PolyRing& ring, size_t ncomp, ModuleOrder ord, bool rank_one = false)
        : ring_(ring), ncomp_(ncomp), ord_(ord), rank_one_(rank_one) {}

    const std::vector<VecPoly>& basis() const { return basis_; }
    const std::vector<ModTerm>& leads() const { return leads_; }
    const ModuleOrder& order() const { return ord_; }
    size_t ncomp() const { return ncomp_; }

    // Adopt an existing reduced basis without running Buchberger.
    void adopt_basis(const std::vector<VecPoly>& basis) {
        basis_.clear();
        leads_.clear();
        for (auto& g : basis) append(g);
    }

    void compute(const std::vector<VecPoly>& gens) {
        basis_.clear();
        leads_.clear();
        for (auto& g : gens) append(g);
        std::vector<std::pair<size_t, size_t>> pending;
        for (size_t i = 0; i < basis_.size(); ++i)
            for (size_t j = i + 1; j < basis_.size(); ++j) add_pair(pending, i, j);
        while (!pending.empty()) {
            size_t pick = select_pair(pending);
            auto [i, j] = pending[pick];
            pending.erase(pending.begin() + static_cast<long>(pick));
            VecPoly s = s_vector(i, j);
            VecPoly r = reduce(s);
            if (vec_is_zero(r)) continue;
            size_t k = append(r);
            for (size_t m = 0; m < k; ++m) add_pair(pending, m, k);
        }
        inter_reduce();
    }

    // Full normal form against the computed basis.
    VecPoly reduce(const VecPoly& v) const {
        VecPoly p = v;
        VecPoly rem = vec_zero(ring_, ncomp_);
        while (true) {
            auto lt = vec_leading_term(p, ord_);
            if (!lt) break;
            bool reduced = false;
            for (size_t k = 0; k < basis_.size(); ++k) {
                const ModTerm& g = leads_[k];
                if (g.comp != lt->comp || !exps_divides(g.e, lt->e)) continue;
                Rational factor = ring_.field().div(lt->c, g.c);
                Exps shift = exps_sub(lt->e, g.e);
                for (size_t t = 0; t < ncomp_; ++t)
                    p[t] = p[t] - basis_[k][t].times_monomial(shift, factor);
                reduced = true;
                break;
            }
            if (!reduced) {
                rem[lt->comp].add_term(lt->e, lt->c);
                Polynomial mono = Polynomial::monomial(ring_, lt->e, ring_.field().neg(lt->c));
                p[lt->comp] = p[lt->comp] + mono;
            }
        }
        return rem;
    }

    bool contains(const VecPoly& v) const { return vec_is_zero(reduce(v)); }

private:
    size_t append(const VecPoly& g) {
        auto lt = vec_leading_term(g, ord_);
        if (!lt) return basis_.size();
        Rational inv = ring_.field().inv(lt->c);
        VecPoly m = g;
        for (auto& p : m) p = p.scaled(inv);
        basis_.push_back(std::move(m));
        leads_.push_back(ModTerm{lt->comp, lt->e, Rational(1)});
        return basis_.size() - 1;
    }

    void add_pair(std::vector<std::pair<size_t, size_t>>& pending, size_t i, size_t j) {
        if (leads_[i].comp != leads_[j].comp) return;
        if (rank_one_ && exps_coprime(leads_[i].e, leads_[j].e)) return;
        pending.emplace_back(i, j);
    }

    size_t select_pair(const std::vector<std::pair<size_t, size_t>>& pending) const {
        size_t best = 0;
        auto key = [&](size_t idx) {
            auto [i, j] = pending[idx];
            return std::make_tuple(total_degree(exps_lcm(leads_[i].e, leads_[j].e)),
                                   exps_lcm(leads_[i].e, leads_[j].e), i, j);
        };
        for (size_t k = 1; k < pending.size(); ++k)
            if (key(k) < key(best)) best = k;
        return best;
    }

    VecPoly s_vector(size_t i, size_t j) const {
        const ModTerm& a = leads_[i];
        const ModTerm& b = leads_[j];
        Exps l = exps_lcm(a.e, b.e);
        Exps u = exps_sub(l, a.e);
        Exps w = exps_sub(l, b.e);
        VecPoly s = vec_zero(ring_, ncomp_);
        for (size_t t = 0; t < ncomp_; ++t)
            s[t] = basis_[i][t].times_monomial(u, 1) - basis_[j][t].times_monomial(w, 1);
        return s;
    }

    void inter_reduce() {
        // drop elements whose lead is divisible by another surviving lead;
        // among equal leads the smaller index survives
        std::vector<char> keep(basis_.size(), 1);
        for (size_t i = 0; i < basis_.size(); ++i) {
            for (size_t j = 0; j < basis_.size(); ++j) {
                if (i == j || !keep[j]) continue;
                if (leads_[j].comp != leads_[i].comp) continue;
                if (!exps_divides(leads_[j].e, leads_[i].e)) continue;
                if (leads_[j].e == leads_[i].e && j > i) continue;
                keep[i] = 0;
                break;
            }
        }
        std::vector<VecPoly> minimal;
        for (size_t i = 0; i < basis_.size(); ++i)
            if (keep[i]) minimal.push_back(basis_[i]);

        // tail-reduce each against the others
        std::vector<VecPoly> out;
        for (size_t i = 0; i < minimal.size(); ++i) {
            ModuleGB tmp(ring_, ncomp_, ord_, rank_one_);
            for (size_t j = 0; j < minimal.size(); ++j)
                if (j != i) tmp.append(minimal[j]);
            VecPoly r = tmp.reduce(minimal[i]);
            if (!vec_is_zero(r)) out.push_back(r);
        }
        basis_.clear();
        leads_.clear();
        for (auto& g : out) append(g);
        // canonical order: leading terms descending
        std::vector<size_t> idx(basis_.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
            return ord_.compare(leads_[a].comp, leads_[a].e, leads_[b].comp, leads_[b].e) > 0;
        });
        std::vector<VecPoly> nb;
        std::vector<ModTerm> nl;
        for (size_t i : idx) {
            nb.push_back(basis_[i]);
            nl.push_back(leads_[i]);
        }
        basis_ = std::move(nb);
        leads_ = std::move(nl);
    }

    PolyRing ring_;
    size_t ncomp_;
    ModuleOrder ord_;
    bool rank_one_;
    std::vector<VecPoly> basis_;
    std::vector<ModTerm> leads_;
};

// Augmented solver for a fixed generating set of a submodule of P^nrows:
// membership, canonical normal forms, cofactor lifts, and syzygies, all
// from one Gröbner basis of {(g_i, e_i)} with the first block dominant.
class SubmoduleSolver {
public:
    SubmoduleSolver(const PolyRing& ring, size_t nrows, std::vector<VecPoly> gens,
                    MonomialOrder ring_ord = MonomialOrder::grevlex())
        : ring_(ring), nrows_(nrows), ngens_(gens.size()),
          gb_(ring, nrows + gens.size(), ModuleOrder{ring_ord, static_cast<int>(nrows)}, false) {
        std::vector<VecPoly> aug;
        for (size_t i = 0; i < gens.size(); ++i) {
            if (gens[i].size() != nrows_) throw std::invalid_argument("generator size mismatch");
            VecPoly v = vec_zero(ring_, nrows_ + ngens_);
            for (size_t t = 0; t < nrows_; ++t) v[t] = gens[i][t];
            v[nrows_ + i] = Polynomial::constant(ring_, 1);
            aug.push_back(std::move(v));
        }
        gb_.compute(aug);
    }

    size_t nrows() const { return nrows_; }

    // canonical normal form of v modulo the submodule
    VecPoly normal_form(const VecPoly& v) const {
        VecPoly r = reduce_aug(v);
        return VecPoly(r.begin(), r.begin() + static_cast<long>(nrows_));
    }

    bool contains(const VecPoly& v) const { return vec_is_zero(normal_form(v)); }

    // cofactors c with sum_i c_i * g_i = v, if v lies in the submodule
    std::optional<std::vector<Polynomial>> lift(const VecPoly& v) const {
        VecPoly r = reduce_aug(v);
        for (size_t t = 0; t < nrows_; ++t)
            if (!r[t].is_zero()) return std::nullopt;
        std::vector<Polynomial> cof;
        for (size_t i = 0; i < ngens_; ++i) cof.push_back(-r[nrows_ + i]);
        return cof;
    }

    // generators of the syzygy module of the g_i
    std::vector<std::vector<Polynomial>> syzygies() const {
        std::vector<std::vector<Polynomial>> out;
        for (auto& g : gb_.basis()) {
            bool first_zero = true;
            for (size_t t = 0; t < nrows_ && first_zero; ++t)
                if (!g[t].is_zero()) first_zero = false;
            if (!first_zero) continue;
            out.emplace_back(g.begin() + static_cast<long>(nrows_), g.end());
        }
        return out;
    }

private:
    VecPoly reduce_aug(const VecPoly& v) const {
        if (v.size() != nrows_) throw std::invalid_argument("vector size mismatch");
        VecPoly a = vec_zero(ring_, nrows_ + ngens_);
        for (size_t t = 0; t < nrows_; ++t) a[t] = v[t];
        return gb_.reduce(a);
    }

    PolyRing ring_;
    size_t nrows_;
    size_t ngens_;
    ModuleGB gb_;
};

} // namespace gendiv
