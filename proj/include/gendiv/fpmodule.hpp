#pragma once

#include "gendiv/matrix.hpp"

namespace gendiv {

// Solver for submodules of A^n, A = P/J: membership, canonical normal
// forms, cofactor lifts and syzygies over the quotient ring, realized by
// appending J·e_i columns at the polynomial level.
class ASolver {
public:
    ASolver(const QuotientRing& A, size_t nrows, std::vector<std::vector<Polynomial>> cols)
        : A_(A), nrows_(nrows), ncols_(cols.size()) {
        const PolyRing& P = A.ambient();
        std::vector<VecPoly> gens = std::move(cols);
        for (auto& rel : A.relation_basis())
            for (size_t i = 0; i < nrows; ++i)
                gens.push_back(vec_unit(P, nrows, i, rel));
        solver_ = std::make_unique<SubmoduleSolver>(P, nrows, std::move(gens));
    }

    size_t ncols() const { return ncols_; }

    bool contains(const std::vector<Polynomial>& v) const { return solver_->contains(v); }

    std::vector<Polynomial> normal_form(const std::vector<Polynomial>& v) const {
        return solver_->normal_form(v);
    }

    // cofactors over A for the user columns only
    std::optional<std::vector<Polynomial>> lift(const std::vector<Polynomial>& v) const {
        auto cof = solver_->lift(v);
        if (!cof) return std::nullopt;
        std::vector<Polynomial> out(cof->begin(), cof->begin() + static_cast<long>(ncols_));
        for (auto& p : out) p = A_.reduce(p);
        return out;
    }

    // syzygies among the user columns over A (entries reduced, zero vectors pruned)
    std::vector<std::vector<Polynomial>> syzygies() const {
        std::vector<std::vector<Polynomial>> out;
        for (auto& s : solver_->syzygies()) {
            std::vector<Polynomial> v(s.begin(), s.begin() + static_cast<long>(ncols_));
            for (auto& p : v) p = A_.reduce(p);
            if (!vec_is_zero(v)) out.push_back(std::move(v));
        }
        return out;
    }

private:
    QuotientRing A_;
    size_t nrows_;
    size_t ncols_;
    std::unique_ptr<SubmoduleSolver> solver_;
};

// Finitely presented module over a QuotientRing: the cokernel of the
// column span of `rel` inside the free module of rank `gens`. Modules
// built from ideal generators keep those ring elements as a realization.
class Module {
public:
    Module() = default;
    Module(QuotientRing ring, size_t gens, PolyMatrix rel)
        : ring_(std::move(ring)), gens_(gens), rel_(rel.reduced(ring_)) {
        if (rel_.rows() != gens_) throw std::invalid_argument("presentation rows != generator count");
    }

    static Module free(const QuotientRing& A, size_t n) {
        return Module(A, n, PolyMatrix(A.ambient(), n, 0));
    }

    // submodule of A^nrows generated by the given columns
    static Module from_columns(const QuotientRing& A, size_t nrows,
                               const std::vector<std::vector<Polynomial>>& cols) {
        ASolver solver(A, nrows, cols);
        auto syz = solver.syzygies();
        PolyMatrix rel = PolyMatrix::from_columns(A.ambient(), cols.size(), syz);
        return Module(A, cols.size(), rel);
    }

    // ideal (g_1, ..., g_k) as a module, generators realized as ring elements
    static Module from_ideal(const QuotientRing& A, const std::vector<Polynomial>& gens) {
        std::vector<std::vector<Polynomial>> cols;
        std::vector<Polynomial> realized;
        for (auto& g : gens) {
            Polynomial r = A.reduce(g);
            cols.push_back({r});
            realized.push_back(r);
        }
        Module m = from_columns(A, 1, cols);
        m.realization_ = realized;
        return m;
    }

    // cyclic module A/I
    static Module quotient_by(const QuotientRing& A, const std::vector<Polynomial>& ideal_gens) {
        PolyMatrix rel(A.ambient(), 1, ideal_gens.size());
        for (size_t j = 0; j < ideal_gens.size(); ++j) rel.at(0, j) = ideal_gens[j];
        return Module(A, 1, rel);
    }

    const QuotientRing& ring() const { return ring_; }
    size_t gens() const { return gens_; }
    const PolyMatrix& rel() const { return rel_; }
    const std::optional<std::vector<Polynomial>>& realization() const { return realization_; }

    void set_realization(std::vector<Polynomial> r) {
        if (r.size() != gens_) throw std::invalid_argument("realization size mismatch");
        realization_ = std::move(r);
    }

    Polynomial realize(const std::vector<Polynomial>& coords) const {
        if (!realization_) throw std::logic_error("module has no realization");
        Polynomial s(ring_.ambient());
        for (size_t i = 0; i < gens_; ++i) s = s + coords[i] * (*realization_)[i];
        return ring_.reduce(s);
    }

    ASolver relation_solver() const { return ASolver(ring_, gens_, rel_.columns()); }

    bool is_zero_module() const {
        if (gens_ == 0) return true;
        ASolver solver = relation_solver();
        for (size_t i = 0; i < gens_; ++i) {
            std::vector<Polynomial> e(gens_, Polynomial::zero(ring_.ambient()));
            e[i] = Polynomial::constant(ring_.ambient(), 1);
            if (!solver.contains(e)) return false;
        }
        return true;
    }

    std::string to_string() const {
        return "coker " + rel_.to_string() + " over " + ring_.to_string();
    }

private:
    QuotientRing ring_;
    size_t gens_ = 0;
    PolyMatrix rel_;
    std::optional<std::vector<Polynomial>> realization_;
};

// Map of finitely presented modules, certified well-defined at construction:
// matrix · (source relations) must land in the column span of the target
// relations.
class ModuleMap {
public:
    ModuleMap() = default;
    ModuleMap(Module source, Module target, PolyMatrix mat)
        : source_(std::move(source)), target_(std::move(target)), mat_(mat.reduced(source_.ring())) {
        if (source_.ring() != target_.ring()) throw std::invalid_argument("module ring mismatch");
        if (mat_.rows() != target_.gens() || mat_.cols() != source_.gens())
            throw std::invalid_argument("module map shape mismatch");
        ASolver solver = target_.relation_solver();
        for (size_t c = 0; c < source_.rel().cols(); ++c) {
            auto img = mat_.apply(source_.rel().column(c));
            if (!solver.contains(img))
                throw std::invalid_argument("module map not well-defined on relation column " +
                                            std::to_string(c));
        }
    }

    static ModuleMap identity(const Module& M) {
        return ModuleMap(M, M, PolyMatrix::identity(M.ring().ambient(), M.gens()));
    }

    const Module& source() const { return source_; }
    const Module& target() const { return target_; }
    const PolyMatrix& matrix() const { return mat_; }

    ModuleMap compose(const ModuleMap& inner) const {
        return ModuleMap(inner.source(), target_, mat_.mul(inner.matrix()));
    }

private:
    Module source_;
    Module target_;
    PolyMatrix mat_;
};

// ---- kernel / cokernel / isomorphism tests --------------------------------

// generators of {v in A^{gens(M)} : F v ∈ im(rel_N)} for a map matrix F
inline std::vector<std::vector<Polynomial>> kernel_preimage_gens(const Module& M, const Module& N,
                                                                 const PolyMatrix& F) {
    std::vector<std::vector<Polynomial>> cols = F.columns();
    for (auto& c : N.rel().columns()) cols.push_back(c);
    ASolver solver(M.ring(), N.gens(), cols);
    std::vector<std::vector<Polynomial>> out;
    for (auto& s : solver.syzygies()) {
        std::vector<Polynomial> v(s.begin(), s.begin() + static_cast<long>(F.cols()));
        if (!vec_is_zero(v)) out.push_back(std::move(v));
    }
    return out;
}

struct IsoVerdict {
    bool iso = false;
    // nonzero canonical representatives when not an isomorphism
    std::optional<std::vector<Polynomial>> kernel_witness;
    std::optional<std::vector<Polynomial>> cokernel_witness;

    std::string to_string() const {
        if (iso) return "ISO";
        std::string s = "NOT_ISO";
        auto vec_str = [](const std::vector<Polynomial>& v) {
            std::string t = "(";
            for (size_t i = 0; i < v.size(); ++i) t += (i ? ", " : "") + v[i].to_string();
            return t + ")";
        };
        if (kernel_witness) s += " kernel " + vec_str(*kernel_witness);
        if (cokernel_witness) s += " cokernel " + vec_str(*cokernel_witness);
        return s;
    }
};

inline IsoVerdict is_iso(const ModuleMap& f) {
    const Module& M = f.source();
    const Module& N = f.target();
    IsoVerdict v;
    // cokernel: every target generator must lie in im(F) + im(rel_N)
    {
        std::vector<std::vector<Polynomial>> cols = f.matrix().columns();
        for (auto& c : N.rel().columns()) cols.push_back(c);
        ASolver solver(N.ring(), N.gens(), cols);
        for (size_t i = 0; i < N.gens(); ++i) {
            std::vector<Polynomial> e(N.gens(), Polynomial::zero(N.ring().ambient()));
            e[i] = Polynomial::constant(N.ring().ambient(), 1);
            if (!solver.contains(e)) {
                v.cokernel_witness = solver.normal_form(e);
                break;
            }
        }
    }
    // kernel: each kernel generator must lie in im(rel_M)
    if (!v.cokernel_witness) {
        auto K = kernel_preimage_gens(M, N, f.matrix());
        ASolver msolver = M.relation_solver();
        for (auto& k : K) {
            if (!msolver.contains(k)) {
                v.kernel_witness = msolver.normal_form(k);
                break;
            }
        }
    }
    v.iso = !v.kernel_witness && !v.cokernel_witness;
    return v;
}

// ---- Hom modules -----------------------------------------------------------

struct HomModule {
    Module module;                    // presentation of Hom(M, N)
    std::vector<PolyMatrix> gen_maps; // generator i realized as a matrix M -> N
    Module source;
    Module target;

    ModuleMap evaluate(size_t gen_index) const {
        return ModuleMap(source, target, gen_maps[gen_index]);
    }

    // realize an element of the Hom module given by coordinates
    PolyMatrix realize(const std::vector<Polynomial>& coords) const {
        PolyMatrix m(source.ring().ambient(), target.gens(), source.gens());
        for (size_t k = 0; k < gen_maps.size(); ++k)
            for (size_t i = 0; i < m.rows(); ++i)
                for (size_t j = 0; j < m.cols(); ++j)
                    m.at(i, j) = m.at(i, j) + coords[k] * gen_maps[k].at(i, j);
        return m.reduced(source.ring());
    }
};

inline HomModule hom_module(const Module& M, const Module& N) {
    if (M.ring() != N.ring()) throw std::invalid_argument("hom_module: ring mismatch");
    const QuotientRing& A = M.ring();
    const PolyRing& P = A.ambient();
    size_t gM = M.gens(), gN = N.gens();
    size_t rM = M.rel().cols(), rN = N.rel().cols();
    size_t u = gN * gM;     // unknown matrix entries, flattened (i, j) -> j*gN + i
    size_t c = gN * rM;     // codomain: one gN-block per source relation

    // E: Phi -> Phi * rel_M, flattened
    std::vector<std::vector<Polynomial>> cols;
    for (size_t j = 0; j < gM; ++j)
        for (size_t i = 0; i < gN; ++i) {
            std::vector<Polynomial> col(c, Polynomial::zero(P));
            for (size_t rc = 0; rc < rM; ++rc) col[rc * gN + i] = M.rel().at(j, rc);
            cols.push_back(std::move(col));
        }
    // target relation blocks
    for (size_t rc = 0; rc < rM; ++rc)
        for (size_t k = 0; k < rN; ++k) {
            std::vector<Polynomial> col(c, Polynomial::zero(P));
            for (size_t i = 0; i < gN; ++i) col[rc * gN + i] = N.rel().at(i, k);
            cols.push_back(std::move(col));
        }

    std::vector<PolyMatrix> gen_maps;
    if (c == 0) {
        // no source relations: every matrix is a hom; take the standard basis
        for (size_t j = 0; j < gM; ++j)
            for (size_t i = 0; i < gN; ++i) {
                PolyMatrix m(P, gN, gM);
                m.at(i, j) = Polynomial::constant(P, 1);
                gen_maps.push_back(m);
            }
    } else {
        ASolver solver(A, c, cols);
        for (auto& s : solver.syzygies()) {
            PolyMatrix m(P, gN, gM);
            bool zero = true;
            for (size_t j = 0; j < gM; ++j)
                for (size_t i = 0; i < gN; ++i) {
                    m.at(i, j) = A.reduce(s[j * gN + i]);
                    if (!m.at(i, j).is_zero()) zero = false;
                }
            if (!zero) gen_maps.push_back(std::move(m));
        }
    }

    // relations among the generator maps modulo im(rel_N)-valued matrices
    size_t h = gen_maps.size();
    PolyMatrix hrel(P, h, 0);
    if (h > 0) {
        std::vector<std::vector<Polynomial>> rcols;
        for (auto& m : gen_maps) {
            std::vector<Polynomial> col(u, Polynomial::zero(P));
            for (size_t j = 0; j < gM; ++j)
                for (size_t i = 0; i < gN; ++i) col[j * gN + i] = m.at(i, j);
            rcols.push_back(std::move(col));
        }
        for (size_t j = 0; j < gM; ++j)
            for (size_t k = 0; k < rN; ++k) {
                std::vector<Polynomial> col(u, Polynomial::zero(P));
                for (size_t i = 0; i < gN; ++i) col[j * gN + i] = N.rel().at(i, k);
                rcols.push_back(std::move(col));
            }
        ASolver solver(A, u, rcols);
        std::vector<std::vector<Polynomial>> rels;
        for (auto& s : solver.syzygies()) {
            std::vector<Polynomial> v(s.begin(), s.begin() + static_cast<long>(h));
            if (!vec_is_zero(v)) rels.push_back(std::move(v));
        }
        hrel = PolyMatrix::from_columns(P, h, rels);
    }

    HomModule out;
    out.module = Module(A, h, hrel);
    out.gen_maps = std::move(gen_maps);
    out.source = M;
    out.target = N;
    return out;
}

inline HomModule dual(const Module& M) { return hom_module(M, Module::free(M.ring(), 1)); }

// ---- biduality --------------------------------------------------------------

struct Biduality {
    HomModule dual1;   // M^dual
    HomModule dual2;   // M^dualdual
    ModuleMap alpha;   // M -> M^dualdual
};

inline Biduality biduality_map(const Module& M) {
    const QuotientRing& A = M.ring();
    const PolyRing& P = A.ambient();
    HomModule d1 = dual(M);
    HomModule d2 = dual(d1.module);
    size_t k = d1.module.gens();
    size_t l = d2.module.gens();
    // evaluation functional at generator j of M, expressed in d2 generators
    std::vector<std::vector<Polynomial>> cols;
    for (auto& psi : d2.gen_maps) {
        std::vector<Polynomial> col(k, Polynomial::zero(P));
        for (size_t i = 0; i < k; ++i) col[i] = psi.at(0, i);
        cols.push_back(std::move(col));
    }
    ASolver solver(A, k, cols);
    PolyMatrix alpha(P, l, M.gens());
    for (size_t j = 0; j < M.gens(); ++j) {
        std::vector<Polynomial> v(k, Polynomial::zero(P));
        for (size_t i = 0; i < k; ++i) v[i] = d1.gen_maps[i].at(0, j);
        auto cof = solver.lift(v);
        if (!cof) throw std::logic_error("biduality: evaluation functional failed to lift");
        for (size_t m = 0; m < l; ++m) alpha.at(m, j) = (*cof)[m];
    }
    Biduality b{std::move(d1), std::move(d2), ModuleMap()};
    b.alpha = ModuleMap(M, b.dual2.module, alpha);
    return b;
}

struct ReflexivityCert {
    bool reflexive;
    IsoVerdict verdict;
};

inline ReflexivityCert is_reflexive(const Module& M) {
    Biduality b = biduality_map(M);
    IsoVerdict v = is_iso(b.alpha);
    return ReflexivityCert{v.iso, v};
}

// Cross-check for reflexive modules: embeds M as the kernel of a map between
// free modules, 0 -> M -> L -> N -> 0 with L free and N inside a free module.
struct ReflexiveSequence {
    PolyMatrix embedding;   // M -> A^k (columns indexed by M's generators)
    PolyMatrix free_map;    // A^k -> A^b, the transposed presentation of M^dual
    bool composite_zero;
    bool embedding_injective;
    bool kernel_matches;
};

inline ReflexiveSequence reflexive_sequence_check(const Module& M) {
    const QuotientRing& A = M.ring();
    HomModule d1 = dual(M);
    size_t k = d1.module.gens();
    PolyMatrix V(A.ambient(), k, M.gens());
    for (size_t j = 0; j < M.gens(); ++j)
        for (size_t i = 0; i < k; ++i) V.at(i, j) = d1.gen_maps[i].at(0, j);
    PolyMatrix Bt = d1.module.rel().transpose(); // A^k -> A^b
    ReflexiveSequence seq{V, Bt, true, true, true};

    // composite is zero in A
    PolyMatrix comp = Bt.mul(V).reduced(A);
    for (size_t i = 0; i < comp.rows(); ++i)
        for (size_t j = 0; j < comp.cols(); ++j)
            if (!comp.at(i, j).is_zero()) seq.composite_zero = false;

    // injectivity of M -> A^k
    Module Lfree = Module::free(A, k);
    auto K = kernel_preimage_gens(M, Lfree, V);
    ASolver msolver = M.relation_solver();
    for (auto& kv : K)
        if (!msolver.contains(kv)) seq.embedding_injective = false;

    // kernel of A^k -> A^b equals the image of M
    Module Bfree = Module::free(A, static_cast<size_t>(Bt.rows()));
    auto KB = kernel_preimage_gens(Lfree, Bfree, Bt);
    ASolver image(A, k, V.columns());
    for (auto& kv : KB)
        if (!image.contains(kv)) seq.kernel_matches = false;
    return seq;
}

// ---- Ext --------------------------------------------------------------------

// free resolution differentials d_1, ..., d_len of M (d_1 = presentation)
inline std::vector<PolyMatrix> free_resolution(const Module& M, size_t len) {
    std::vector<PolyMatrix> ds;
    PolyMatrix d = M.rel();
    size_t rank = M.gens();
    for (size_t i = 0; i < len; ++i) {
        ds.push_back(d);
        if (d.cols() == 0) {
            d = PolyMatrix(M.ring().ambient(), 0, 0);
            rank = 0;
            continue;
        }
        ASolver solver(M.ring(), rank, d.columns());
        auto syz = solver.syzygies();
        rank = d.cols();
        d = PolyMatrix::from_columns(M.ring().ambient(), rank, syz);
    }
    return ds;
}

// homology ker(out) / im(in) at a module C with presentation rel_C
inline Module homology_at(const QuotientRing& A, size_t gC, const PolyMatrix& relC,
                          const PolyMatrix& out_map, size_t g_next, const PolyMatrix& rel_next,
                          const std::vector<std::vector<Polynomial>>& in_cols) {
    Module C(A, gC, relC);
    Module Nxt(A, g_next, rel_next);
    auto K = kernel_preimage_gens(C, Nxt, out_map);
    if (K.empty()) return Module(A, 0, PolyMatrix(A.ambient(), 0, 0));
    std::vector<std::vector<Polynomial>> cols = K;
    for (auto& c : in_cols) cols.push_back(c);
    for (auto& c : relC.columns()) cols.push_back(c);
    ASolver solver(A, gC, cols);
    std::vector<std::vector<Polynomial>> rels;
    for (auto& s : solver.syzygies()) {
        std::vector<Polynomial> v(s.begin(), s.begin() + static_cast<long>(K.size()));
        if (!vec_is_zero(v)) rels.push_back(std::move(v));
    }
    return Module(A, K.size(), PolyMatrix::from_columns(A.ambient(), K.size(), rels));
}

// Ext^i_A(M, N) via a truncated free resolution of M
inline Module ext_module(size_t i, const Module& M, const Module& N) {
    if (M.ring() != N.ring()) throw std::invalid_argument("ext: ring mismatch");
    const QuotientRing& A = M.ring();
    const PolyRing& P = A.ambient();
    size_t gN = N.gens(), rN = N.rel().cols();
    auto ds = free_resolution(M, i + 1);
    // ranks b_0 = gens(M), b_k = cols(d_k)
    std::vector<size_t> b(i + 2);
    b[0] = M.gens();
    for (size_t k = 1; k <= i + 1; ++k) b[k] = ds[k - 1].cols();

    auto hom_gens = [&](size_t k) { return b[k] * gN; };
    auto hom_rel = [&](size_t k) {
        PolyMatrix rel(P, b[k] * gN, b[k] * rN);
        for (size_t blk = 0; blk < b[k]; ++blk)
            for (size_t i2 = 0; i2 < gN; ++i2)
                for (size_t j2 = 0; j2 < rN; ++j2)
                    rel.at(blk * gN + i2, blk * rN + j2) = N.rel().at(i2, j2);
        return rel;
    };
    auto delta = [&](size_t k) {
        // Hom(F_k, N) -> Hom(F_{k+1}, N), composition with d_{k+1}
        PolyMatrix m(P, b[k + 1] * gN, b[k] * gN);
        const PolyMatrix& d = ds[k]; // d_{k+1}: F_{k+1} -> F_k, shape b[k] x b[k+1]
        for (size_t cblk = 0; cblk < b[k + 1]; ++cblk)
            for (size_t rblk = 0; rblk < b[k]; ++rblk)
                for (size_t i2 = 0; i2 < gN; ++i2)
                    m.at(cblk * gN + i2, rblk * gN + i2) = d.at(rblk, cblk);
        return m;
    };

    PolyMatrix out_map = delta(i);
    std::vector<std::vector<Polynomial>> in_cols;
    if (i > 0) {
        PolyMatrix dprev = delta(i - 1);
        in_cols = dprev.columns();
    }
    return homology_at(A, hom_gens(i), hom_rel(i), out_map, hom_gens(i + 1), hom_rel(i + 1),
                       in_cols);
}

// ---- annihilators, Fitting ideals, local freeness ---------------------------

inline Ideal module_annihilator(const Module& M) {
    const QuotientRing& A = M.ring();
    const PolyRing& P = A.ambient();
    if (M.gens() == 0) return Ideal(P, {Polynomial::constant(P, 1)});
    std::optional<Ideal> acc;
    for (size_t i = 0; i < M.gens(); ++i) {
        std::vector<std::vector<Polynomial>> cols;
        std::vector<Polynomial> e(M.gens(), Polynomial::zero(P));
        e[i] = Polynomial::constant(P, 1);
        cols.push_back(e);
        for (auto& c : M.rel().columns()) cols.push_back(c);
        ASolver solver(A, M.gens(), cols);
        std::vector<Polynomial> gens;
        for (auto& s : solver.syzygies())
            if (!s[0].is_zero()) gens.push_back(s[0]);
        Ideal Ii(P, gens);
        acc = acc ? ideal_intersect(*acc, Ii) : Ii;
    }
    // fold in the ring relations so the result is the full preimage in P
    std::vector<Polynomial> gens = acc->gens();
    for (auto& g : A.relations().gens()) gens.push_back(g);
    return Ideal(P, Ideal(P, gens).groebner());
}

// Fitting ideal Fitt_i(M) as an ideal of the ambient ring, relations included
inline Ideal fitting_ideal(const Module& M, size_t i) {
    const PolyRing& P = M.ring().ambient();
    if (i >= M.gens()) return Ideal(P, {Polynomial::constant(P, 1)});
    size_t k = M.gens() - i;
    std::vector<Polynomial> gens = M.rel().minors(k);
    for (auto& g : M.ring().relations().gens()) gens.push_back(g);
    return Ideal(P, gens);
}

// M_p free of rank one, tested via Fitt_0(M) ⊆ p and Fitt_1(M) ⊄ p
inline bool localize_is_free_rank_one(const Module& M, const PrimeIdeal& p) {
    auto pgb = p.ideal.groebner();
    Ideal f0 = fitting_ideal(M, 0);
    for (auto& m : f0.gens())
        if (!normal_form(m, pgb).is_zero()) return false;
    Ideal f1 = fitting_ideal(M, 1);
    for (auto& m : f1.gens())
        if (!normal_form(m, pgb).is_zero()) return true;
    return false;
}

// kappa(p)-rank of a module killed by p, via Fitting ideals over A/p
inline size_t kappa_rank_at(const Module& E, const PrimeIdeal& p) {
    auto pgb = p.ideal.groebner();
    for (size_t r = 0; r <= E.gens(); ++r) {
        size_t k = E.gens() - r;
        if (k == 0) return r;
        for (auto& m : E.rel().minors(k))
            if (!normal_form(m, pgb).is_zero()) return r;
    }
    return E.gens();
}

// ---- base change -------------------------------------------------------------

inline Module base_change(const Module& M, const RingMap& f) {
    if (M.ring() != f.source()) throw std::invalid_argument("base_change: module not over map source");
    Module out(f.target(), M.gens(), M.rel().mapped(f));
    if (M.realization()) {
        std::vector<Polynomial> r;
        for (auto& g : *M.realization()) r.push_back(f.apply(g));
        out.set_realization(std::move(r));
    }
    return out;
}

} // namespace gendiv
