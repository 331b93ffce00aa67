#pragma once

#include "gendiv/divisor.hpp"
#include "gendiv/etale.hpp"

namespace gendiv {

struct NotAutomorphism : std::runtime_error {
    explicit NotAutomorphism(const std::string& msg) : std::runtime_error(msg) {}
};
struct TableViolation : std::runtime_error {
    explicit TableViolation(const std::string& msg) : std::runtime_error(msg) {}
};
struct CocycleFailure : std::runtime_error {
    explicit CocycleFailure(const std::string& msg) : std::runtime_error(msg) {}
};
struct DualCocycleFailure : std::runtime_error {
    explicit DualCocycleFailure(const std::string& msg) : std::runtime_error(msg) {}
};
struct NotInvariant : std::runtime_error {
    explicit NotInvariant(const std::string& msg) : std::runtime_error(msg) {}
};

// Finite group given by its multiplication table. Identity, inverses and
// associativity are verified at construction.
class GroupTable {
public:
    GroupTable() = default;
    GroupTable(std::vector<std::string> names, std::vector<std::vector<size_t>> table)
        : names_(std::move(names)), table_(std::move(table)) {
        size_t n = names_.size();
        if (table_.size() != n) throw TableViolation("table is not square");
        for (auto& row : table_) {
            if (row.size() != n) throw TableViolation("table is not square");
            for (size_t v : row)
                if (v >= n) throw TableViolation("table entry out of range");
        }
        // identity
        identity_ = n;
        for (size_t e = 0; e < n; ++e) {
            bool ok = true;
            for (size_t g = 0; g < n; ++g)
                if (table_[e][g] != g || table_[g][e] != g) ok = false;
            if (ok) { identity_ = e; break; }
        }
        if (identity_ == n) throw TableViolation("no identity element");
        // inverses
        for (size_t g = 0; g < n; ++g) {
            bool has = false;
            for (size_t h = 0; h < n; ++h)
                if (table_[g][h] == identity_ && table_[h][g] == identity_) has = true;
            if (!has) throw TableViolation("element " + names_[g] + " has no inverse");
        }
        // associativity
        for (size_t a = 0; a < n; ++a)
            for (size_t b = 0; b < n; ++b)
                for (size_t c = 0; c < n; ++c)
                    if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
                        throw TableViolation("associativity fails at (" + names_[a] + "," +
                                             names_[b] + "," + names_[c] + ")");
    }

    static GroupTable cyclic(size_t n, const std::string& prefix = "g") {
        std::vector<std::string> names;
        std::vector<std::vector<size_t>> table(n, std::vector<size_t>(n));
        for (size_t i = 0; i < n; ++i) {
            names.push_back(i == 0 ? "e" : prefix + std::to_string(i));
            for (size_t j = 0; j < n; ++j) table[i][j] = (i + j) % n;
        }
        return GroupTable(std::move(names), std::move(table));
    }

    size_t size() const { return names_.size(); }
    size_t identity() const { return identity_; }
    size_t mul(size_t a, size_t b) const { return table_[a][b]; }
    size_t inverse(size_t g) const {
        for (size_t h = 0; h < size(); ++h)
            if (mul(g, h) == identity_ && mul(h, g) == identity_) return h;
        throw TableViolation("no inverse");
    }
    const std::string& name(size_t g) const { return names_[g]; }
    int index_of(const std::string& n) const {
        for (size_t i = 0; i < size(); ++i)
            if (names_[i] == n) return static_cast<int>(i);
        return -1;
    }

private:
    std::vector<std::string> names_;
    std::vector<std::vector<size_t>> table_;
    size_t identity_ = 0;
};

// Groupoid presentation of a quotient stack by a finite group action: one
// chart automorphism per group element, composition matching the table.
class GroupGroupoid {
public:
    GroupGroupoid() = default;
    GroupGroupoid(QuotientRing chart, GroupTable group, std::vector<RingMap> action)
        : chart_(std::move(chart)), group_(std::move(group)), action_(std::move(action)) {
        if (action_.size() != group_.size())
            throw std::invalid_argument("one ring map per group element required");
        for (size_t g = 0; g < group_.size(); ++g) {
            if (action_[g].source() != chart_ || action_[g].target() != chart_)
                throw NotAutomorphism("action of " + group_.name(g) + " is not an endomorphism of the chart");
        }
        if (!action_[group_.identity()].is_identity())
            throw NotAutomorphism("identity element must act as the identity map");
        // composition matches the table on the chart variables
        for (size_t g = 0; g < group_.size(); ++g)
            for (size_t h = 0; h < group_.size(); ++h) {
                RingMap composite = action_[g].compose(action_[h]);
                if (!composite.equals(action_[group_.mul(g, h)]))
                    throw TableViolation("action does not respect the table at (" +
                                         group_.name(g) + "," + group_.name(h) + ")");
            }
        // two-sided inverses act as two-sided inverse maps
        for (size_t g = 0; g < group_.size(); ++g) {
            RingMap round = action_[g].compose(action_[group_.inverse(g)]);
            if (!round.is_identity())
                throw NotAutomorphism("action of " + group_.name(g) + " is not invertible");
        }
    }

    const QuotientRing& chart() const { return chart_; }
    const GroupTable& group() const { return group_; }
    const RingMap& act(size_t g) const { return action_[g]; }

private:
    QuotientRing chart_;
    GroupTable group_;
    std::vector<RingMap> action_;
};

inline GroupGroupoid build_group_groupoid(const QuotientRing& chart, const GroupTable& table,
                                          const std::vector<RingMap>& action) {
    return GroupGroupoid(chart, table, action);
}

// Equivariant module: a module on the chart with one semilinear map per
// group element, Θ_g(v) = L_g·ρ_g(v) on coordinates, satisfying the cocycle
// identity L_{gh} = L_g·ρ_g(L_h).
struct EquivariantModule {
    GroupGroupoid groupoid;
    Module module;
    std::vector<PolyMatrix> action_mats; // L_g, one per group element
};

// presentation of the g-twist of M: relation entries pushed through ρ_g
inline Module twist_module(const GroupGroupoid& G, const Module& M, size_t g) {
    return Module(G.chart(), M.gens(), M.rel().mapped(G.act(g)));
}

struct CocycleCert {
    bool pass = true;
    std::string failure; // empty on success
    std::vector<IsoVerdict> invertibility; // one per group element
};

inline CocycleCert check_cocycle(const EquivariantModule& E) {
    const GroupGroupoid& G = E.groupoid;
    const QuotientRing& A = G.chart();
    const Module& M = E.module;
    if (E.action_mats.size() != G.group().size())
        throw std::invalid_argument("one action matrix per group element required");
    CocycleCert cert;
    ASolver rels = M.relation_solver();
    auto matrices_equal_as_maps = [&](const PolyMatrix& X, const PolyMatrix& Y) -> std::optional<Polynomial> {
        PolyMatrix diff = X.sub(Y).reduced(A);
        for (size_t c = 0; c < diff.cols(); ++c)
            if (!rels.contains(diff.column(c)))
                for (size_t i = 0; i < diff.rows(); ++i)
                    if (!diff.at(i, c).is_zero()) return diff.at(i, c);
        return std::nullopt;
    };
    // φ_e = identity
    size_t e = G.group().identity();
    if (auto w = matrices_equal_as_maps(E.action_mats[e],
                                        PolyMatrix::identity(A.ambient(), M.gens()))) {
        cert.pass = false;
        cert.failure = "identity action map differs from the identity: " + w->to_string();
        throw CocycleFailure(cert.failure);
    }
    // well-definedness and invertibility of each Θ_g as a map twist_g(M) -> M
    for (size_t g = 0; g < G.group().size(); ++g) {
        ModuleMap theta(twist_module(G, M, g), M, E.action_mats[g]); // throws if ill-defined
        IsoVerdict v = is_iso(theta);
        cert.invertibility.push_back(v);
        if (!v.iso)
            throw CocycleFailure("action map of " + G.group().name(g) + " is not invertible: " +
                                 v.to_string());
    }
    // pairwise cocycle identity
    for (size_t g = 0; g < G.group().size(); ++g)
        for (size_t h = 0; h < G.group().size(); ++h) {
            PolyMatrix lhs = E.action_mats[G.group().mul(g, h)];
            PolyMatrix rhs = E.action_mats[g].mul(E.action_mats[h].mapped(G.act(g))).reduced(A);
            if (matrices_equal_as_maps(lhs, rhs)) {
                cert.pass = false;
                std::string composite = rhs.rows() == 1 && rhs.cols() == 1
                                            ? rhs.at(0, 0).to_string()
                                            : rhs.to_string();
                cert.failure = "cocycle fails at (" + G.group().name(g) + "," +
                               G.group().name(h) + "): composite=" + composite;
                throw CocycleFailure(cert.failure);
            }
        }
    return cert;
}

// ---- chart families and descent -------------------------------------------------

struct ChartFamilyEdge {
    std::string name;
    RingMap map;          // chart i -> chart j
    size_t source_chart;
    size_t target_chart;
    PolyMatrix comparison; // base_change(M_source) -> M_target
};

struct ChartFamily {
    std::vector<QuotientRing> charts;
    std::vector<Module> modules; // one per chart
    std::vector<ChartFamilyEdge> edges;
};

struct DescentEdgeReport {
    std::string edge;
    IsoVerdict verdict;
};

struct DescentReport {
    std::vector<DescentEdgeReport> edges;
    bool pass = true;
};

inline DescentReport descent_check(const ChartFamily& family) {
    DescentReport rep;
    for (auto& e : family.edges) {
        Module bc = base_change(family.modules[e.source_chart], e.map);
        ModuleMap cmp(bc, family.modules[e.target_chart], e.comparison);
        DescentEdgeReport er{e.name, is_iso(cmp)};
        rep.pass = rep.pass && er.verdict.iso;
        rep.edges.push_back(std::move(er));
    }
    return rep;
}

// ---- stack divisors -------------------------------------------------------------

struct StackDivisor {
    EquivariantModule equivariant;
    GeneralizedDivisor divisor;                // on the underlying module
    std::vector<PolyMatrix> dual_action_mats;  // induced equivariant structure on the dual
    CocycleCert dual_cocycle;
};

// induced semilinear action on the dual: Ψ_g(ψ) = ρ_g ∘ ψ ∘ Θ_g^{-1},
// realized on generators by lifting the rows ρ_g(W_i · L_{g^{-1}})
inline std::vector<PolyMatrix> induce_dual_action(const EquivariantModule& E, const HomModule& D) {
    const GroupGroupoid& G = E.groupoid;
    const QuotientRing& A = G.chart();
    size_t k = D.module.gens();
    std::vector<std::vector<Polynomial>> cols;
    for (auto& psi : D.gen_maps) {
        std::vector<Polynomial> col;
        for (size_t j = 0; j < E.module.gens(); ++j) col.push_back(psi.at(0, j));
        cols.push_back(std::move(col));
    }
    ASolver span(A, E.module.gens(), cols);
    std::vector<PolyMatrix> out;
    for (size_t g = 0; g < G.group().size(); ++g) {
        size_t ginv = G.group().inverse(g);
        PolyMatrix Dg(A.ambient(), k, k);
        for (size_t i = 0; i < k; ++i) {
            PolyMatrix row = D.gen_maps[i].mul(E.action_mats[ginv]).mapped(G.act(g));
            std::vector<Polynomial> v;
            for (size_t j = 0; j < E.module.gens(); ++j) v.push_back(row.at(0, j));
            auto cof = span.lift(v);
            if (!cof)
                throw DualCocycleFailure("dual action functional failed to lift for " +
                                         G.group().name(g));
            for (size_t m = 0; m < k; ++m) Dg.at(m, i) = (*cof)[m];
        }
        out.push_back(std::move(Dg));
    }
    return out;
}

inline StackDivisor validate_stack_divisor(const EquivariantModule& E,
                                           const std::vector<PrimeIdeal>& declared = {}) {
    check_cocycle(E);
    StackDivisor D;
    D.equivariant = E;
    D.divisor = validate_divisor(E.module, declared);
    D.dual_action_mats = induce_dual_action(E, D.divisor.I);
    EquivariantModule dualE{E.groupoid, D.divisor.I.module, D.dual_action_mats};
    try {
        D.dual_cocycle = check_cocycle(dualE);
    } catch (const CocycleFailure& f) {
        throw DualCocycleFailure(f.what());
    }
    return D;
}

// ---- invariant sections -----------------------------------------------------------

struct InvariantSection {
    std::vector<Polynomial> coords;
    std::optional<Polynomial> realized; // for ideal-realized modules
};

// Basis of the Θ-fixed sections, computed over the coefficient space of
// chart-module elements of degree ≤ bound. For realized modules the degree
// bound constrains (and the report prints) the realized ring elements.
inline std::vector<InvariantSection> invariant_sections(const EquivariantModule& E, int bound) {
    const GroupGroupoid& G = E.groupoid;
    const QuotientRing& A = G.chart();
    const PolyRing& P = A.ambient();
    const CoeffField& F = A.field();
    const Module& M = E.module;
    auto monos = standard_monomials_up_to(A, bound);
    size_t nm = monos.size();
    size_t nunk = nm * M.gens();
    if (nunk == 0) return {};

    ASolver rels = M.relation_solver();

    // linear conditions: NF(v − Θ_g v) = 0 for all g, plus realized-degree cuts
    std::vector<std::vector<Rational>> rows;
    auto add_rows_for = [&](std::vector<std::vector<Polynomial>>& exprs) {
        // exprs[u] = vector in A^{gens} linear in unknown u; one row per
        // (component, monomial) appearing
        std::map<std::pair<size_t, Exps>, size_t> coord;
        for (size_t u = 0; u < nunk; ++u)
            for (size_t c = 0; c < M.gens(); ++c)
                for (auto& [e, cf] : exprs[u][c].terms()) {
                    auto key = std::make_pair(c, e);
                    if (!coord.count(key)) coord.emplace(key, coord.size());
                }
        std::vector<std::vector<Rational>> block(coord.size(), std::vector<Rational>(nunk, 0));
        for (size_t u = 0; u < nunk; ++u)
            for (size_t c = 0; c < M.gens(); ++c)
                for (auto& [e, cf] : exprs[u][c].terms())
                    block[coord.at(std::make_pair(c, e))][u] = cf;
        for (auto& r : block) rows.push_back(std::move(r));
    };

    for (size_t g = 0; g < G.group().size(); ++g) {
        if (g == G.group().identity()) continue;
        std::vector<std::vector<Polynomial>> exprs;
        for (size_t u = 0; u < nunk; ++u) {
            size_t j = u / nm, mi = u % nm;
            std::vector<Polynomial> v(M.gens(), Polynomial::zero(P));
            v[j] = Polynomial::monomial(P, monos[mi], 1);
            // Θ_g(v) = L_g · ρ_g(v)
            std::vector<Polynomial> tw;
            for (size_t c = 0; c < M.gens(); ++c) tw.push_back(G.act(g).apply(v[c]));
            std::vector<Polynomial> thv = E.action_mats[g].apply(tw);
            std::vector<Polynomial> diff(M.gens());
            for (size_t c = 0; c < M.gens(); ++c) diff[c] = A.reduce(v[c] - thv[c]);
            exprs.push_back(rels.normal_form(diff));
        }
        add_rows_for(exprs);
    }
    if (M.realization()) {
        // coefficients of realized monomials of degree > bound must vanish
        std::vector<std::vector<Polynomial>> exprs;
        for (size_t u = 0; u < nunk; ++u) {
            size_t j = u / nm, mi = u % nm;
            Polynomial realized =
                A.reduce(Polynomial::monomial(P, monos[mi], 1) * (*M.realization())[j]);
            Polynomial high(P);
            for (auto& [e, cf] : realized.terms())
                if (total_degree(e) > bound) high.add_term(e, cf);
            exprs.push_back({high});
        }
        // reuse the row builder with a single-component view
        std::map<Exps, size_t> coord;
        for (auto& ex : exprs)
            for (auto& [e, cf] : ex[0].terms())
                if (!coord.count(e)) coord.emplace(e, coord.size());
        std::vector<std::vector<Rational>> block(coord.size(), std::vector<Rational>(nunk, 0));
        for (size_t u = 0; u < nunk; ++u)
            for (auto& [e, cf] : exprs[u][0].terms()) block[coord.at(e)][u] = cf;
        for (auto& r : block) rows.push_back(std::move(r));
    }

    FieldMatrix mat(F, nunk);
    for (auto& r : rows) mat.add_row(std::move(r));
    mat.rref();
    auto basis = mat.nullspace_basis();

    // canonicalize: drop solutions that are zero in M, reduce the remainder
    // to a basis of the fixed space via normal-form signatures
    std::vector<InvariantSection> out;
    std::map<std::pair<size_t, Exps>, size_t> sig_coord;
    FieldMatrix sig(F, 0);
    std::vector<std::vector<Rational>> sig_rows;
    auto signature = [&](const std::vector<Polynomial>& nf) {
        std::vector<Rational> v;
        for (size_t c = 0; c < nf.size(); ++c)
            for (auto& [e, cf] : nf[c].terms()) {
                auto key = std::make_pair(c, e);
                if (!sig_coord.count(key)) sig_coord.emplace(key, sig_coord.size());
            }
        v.assign(sig_coord.size(), 0);
        for (size_t c = 0; c < nf.size(); ++c)
            for (auto& [e, cf] : nf[c].terms()) v[sig_coord.at(std::make_pair(c, e))] = cf;
        return v;
    };
    std::vector<std::vector<Rational>> accepted_sigs;
    for (auto& sol : basis) {
        std::vector<Polynomial> coords(M.gens(), Polynomial::zero(P));
        for (size_t u = 0; u < nunk; ++u) {
            if (sol[u] == 0) continue;
            size_t j = u / nm, mi = u % nm;
            coords[j].add_term(monos[mi], sol[u]);
        }
        std::vector<Polynomial> nf = rels.normal_form(coords);
        if (vec_is_zero(nf)) continue;
        // linear independence of the normal forms over the field
        std::vector<Rational> s = signature(nf);
        FieldMatrix test(F, sig_coord.size());
        for (auto& prev : accepted_sigs) {
            std::vector<Rational> padded = prev;
            padded.resize(sig_coord.size(), 0);
            test.add_row(padded);
        }
        test.add_row(s);
        test.rref();
        if (test.rank() <= accepted_sigs.size()) continue; // dependent on earlier sections
        accepted_sigs.push_back(s);
        InvariantSection section;
        section.coords = coords;
        if (M.realization()) section.realized = M.realize(coords);
        out.push_back(std::move(section));
    }
    return out;
}

// ---- effective stack divisors -------------------------------------------------------

struct SubstackReport {
    Ideal ideal;
    SubschemeReport chart_report;
    std::vector<std::pair<std::string, bool>> invariance; // per group element
};

inline bool element_invariant(const EquivariantModule& E, const std::vector<Polynomial>& coords) {
    const GroupGroupoid& G = E.groupoid;
    const QuotientRing& A = G.chart();
    ASolver rels = E.module.relation_solver();
    for (size_t g = 0; g < G.group().size(); ++g) {
        std::vector<Polynomial> tw;
        for (size_t c = 0; c < E.module.gens(); ++c) tw.push_back(G.act(g).apply(coords[c]));
        std::vector<Polynomial> thv = E.action_mats[g].apply(tw);
        std::vector<Polynomial> diff(E.module.gens());
        for (size_t c = 0; c < E.module.gens(); ++c) diff[c] = A.reduce(coords[c] - thv[c]);
        if (!rels.contains(diff)) return false;
    }
    return true;
}

// effectivity for stack divisors: the embedding must be equivariant, so the
// evaluation point is drawn from the invariant elements only
inline bool is_effective_stack(StackDivisor& D) {
    if (D.divisor.effective) return true;
    const QuotientRing& A = D.equivariant.groupoid.chart();
    for (auto& coords : effectivity_candidates(D.divisor.F)) {
        if (!element_invariant(D.equivariant, coords)) continue;
        PolyMatrix row = evaluation_row(D.divisor.I, coords);
        bool zero = true;
        for (size_t i = 0; i < row.cols(); ++i)
            if (!row.at(0, i).is_zero()) zero = false;
        if (zero && D.divisor.I.module.gens() > 0) continue;
        if (!evaluation_injective(D.divisor.I, row)) continue;
        EffectiveData eff;
        eff.at_element = coords;
        for (size_t i = 0; i < row.cols(); ++i) eff.image_gens.push_back(row.at(0, i));
        std::vector<Polynomial> gens = eff.image_gens;
        for (auto& g : A.relations().gens()) gens.push_back(g);
        eff.image = Ideal(A.ambient(), Ideal(A.ambient(), gens).groebner());
        D.divisor.effective = std::move(eff);
        return true;
    }
    return false;
}

inline SubstackReport stack_effective_to_substack(StackDivisor& D,
                                                  const std::vector<PrimeIdeal>& declared = {}) {
    if (!is_effective_stack(D))
        throw std::invalid_argument("stack divisor has no equivariant effective realization");
    const GroupGroupoid& G = D.equivariant.groupoid;
    SubstackReport rep;
    rep.chart_report = effective_to_subscheme(D.divisor, declared);
    rep.ideal = rep.chart_report.ideal;
    auto gb = rep.ideal.groebner();
    for (size_t g = 0; g < G.group().size(); ++g) {
        bool invariant = true;
        for (auto& gen : rep.ideal.gens()) {
            if (!normal_form(G.act(g).apply(gen), gb).is_zero()) invariant = false;
            if (!normal_form(G.act(G.group().inverse(g)).apply(gen), gb).is_zero())
                invariant = false;
        }
        rep.invariance.emplace_back(G.group().name(g), invariant);
        if (!invariant)
            throw NotInvariant("substack ideal not fixed by " + G.group().name(g));
    }
    return rep;
}

// an invariant nondegenerate section determines an effective stack divisor
inline StackDivisor section_to_stack_effective(const StackDivisor& D,
                                               const std::vector<Polynomial>& coords,
                                               const std::vector<PrimeIdeal>& declared = {}) {
    const GroupGroupoid& G = D.equivariant.groupoid;
    const QuotientRing& A = G.chart();
    const Module& M = D.equivariant.module;
    // invariance of the section
    ASolver rels = M.relation_solver();
    for (size_t g = 0; g < G.group().size(); ++g) {
        std::vector<Polynomial> tw;
        for (size_t c = 0; c < M.gens(); ++c) tw.push_back(G.act(g).apply(coords[c]));
        std::vector<Polynomial> thv = D.equivariant.action_mats[g].apply(tw);
        std::vector<Polynomial> diff(M.gens());
        for (size_t c = 0; c < M.gens(); ++c) diff[c] = A.reduce(coords[c] - thv[c]);
        if (!rels.contains(diff))
            throw NotInvariant("section is not invariant under " + G.group().name(g));
    }
    StackDivisor out = D;
    out.divisor = section_to_effective(D.divisor, coords, declared);
    // invariance of the image ideal
    auto gb = out.divisor.effective->image.groebner();
    for (size_t g = 0; g < G.group().size(); ++g)
        for (auto& gen : out.divisor.effective->image.gens())
            if (!normal_form(G.act(g).apply(gen), gb).is_zero())
                throw NotInvariant("image ideal not fixed by " + G.group().name(g));
    return out;
}

} // namespace gendiv
