#pragma once

#include "gendiv/linalg.hpp"
#include "gendiv/local.hpp"

namespace gendiv {

struct BadPresentation : std::runtime_error {
    explicit BadPresentation(const std::string& msg) : std::runtime_error(msg) {}
};
struct NotEtaleAt : std::runtime_error {
    explicit NotEtaleAt(const std::string& msg) : std::runtime_error(msg) {}
};
struct SourceZerodivisor : std::runtime_error {
    explicit SourceZerodivisor(const std::string& msg) : std::runtime_error(msg) {}
};
struct SourceNotReflexive : std::runtime_error {
    explicit SourceNotReflexive(const std::string& msg) : std::runtime_error(msg) {}
};

enum class EtaleScope { Global, AtPrimes };

// Standard étale presentation of a ring map B -> A: the target is
// B[y_1..y_n]/(f_1..f_n) with invertible jacobian determinant. When the
// determinant is a unit the certificate is global; otherwise it holds at
// the supplied primes avoiding the jacobian locus.
struct EtaleCertificate {
    RingMap map;
    std::vector<std::string> presentation_vars;
    std::vector<Polynomial> presentation_rels; // in the target ambient ring
    Polynomial jacobian;                       // det of the jacobian, reduced in the target
    EtaleScope scope = EtaleScope::Global;
    std::vector<PrimeIdeal> primes;

    bool covers(const PrimeIdeal& q) const {
        if (scope == EtaleScope::Global) return true;
        for (auto& p : primes)
            if (ideal_equal(p.ideal, q.ideal)) return true;
        return false;
    }
};

inline EtaleCertificate certify_etale(const RingMap& f,
                                      const std::vector<std::string>& presentation_vars,
                                      const std::vector<Polynomial>& presentation_rels,
                                      const std::vector<PrimeIdeal>& primes = {},
                                      const std::optional<Polynomial>& declared_jacobian = std::nullopt) {
    const QuotientRing& A = f.target();
    const QuotientRing& B = f.source();
    const PolyRing& PA = A.ambient();
    if (presentation_vars.size() != presentation_rels.size())
        throw BadPresentation("presentation needs as many relations as new variables");
    std::vector<int> pvar_idx;
    for (auto& name : presentation_vars) {
        int idx = PA.var_index(name);
        if (idx < 0) throw BadPresentation("presentation variable " + name + " not in target ring");
        pvar_idx.push_back(idx);
    }
    // the presentation must reproduce the target ring:
    // (images of source relations) + (presentation relations) = target relations
    std::vector<Polynomial> gens;
    for (auto& rel : B.relation_basis()) gens.push_back(f.substitute(rel));
    for (auto& g : presentation_rels) gens.push_back(g);
    Ideal pres_ideal(PA, gens);
    if (!ideal_equal(pres_ideal, A.relations()))
        throw BadPresentation("presentation ideal does not reproduce the target relations");

    PolyMatrix jac(PA, presentation_rels.size(), presentation_rels.size());
    for (size_t i = 0; i < presentation_rels.size(); ++i)
        for (size_t j = 0; j < pvar_idx.size(); ++j)
            jac.at(i, j) = presentation_rels[i].derivative(static_cast<size_t>(pvar_idx[j]));
    Polynomial det = A.reduce(jac.determinant());
    if (declared_jacobian && !A.elements_equal(det, *declared_jacobian))
        throw BadPresentation("declared jacobian disagrees with the computed determinant: " +
                              det.to_string());

    EtaleCertificate cert{f, presentation_vars, presentation_rels, det, EtaleScope::Global, {}};
    if (A.is_unit(det)) return cert;

    cert.scope = EtaleScope::AtPrimes;
    std::string failing;
    for (auto& q : primes) {
        require_prime_of(A, q);
        if (normal_form(det, q.ideal.groebner()).is_zero())
            failing += (failing.empty() ? "" : ", ") + ideal_key(q.ideal);
        else
            cert.primes.push_back(q);
    }
    if (!failing.empty())
        throw NotEtaleAt("jacobian determinant vanishes at: " + failing);
    return cert;
}

// f^{-1}(q) via elimination in the graph ring
inline PrimeIdeal contract_prime(const RingMap& f, const PrimeIdeal& q) {
    const QuotientRing& A = f.target();
    const QuotientRing& B = f.source();
    require_prime_of(A, q);
    std::vector<std::string> tags;
    for (size_t i = 0; i < B.nvars(); ++i) tags.push_back(B.ambient().var(i) + "@src");
    PolyRing E = extend_ring(A.ambient(), tags);
    std::vector<Polynomial> gens;
    for (auto& g : q.ideal.gens()) gens.push_back(transport(g, E));
    for (auto& g : A.relations().gens()) gens.push_back(transport(g, E));
    for (size_t i = 0; i < B.nvars(); ++i) {
        int ti = E.var_index(tags[i]);
        gens.push_back(Polynomial::variable(E, ti) - transport(f.images()[i], E));
    }
    std::vector<int> elim;
    for (size_t i = 0; i < A.ambient().nvars(); ++i) elim.push_back(static_cast<int>(i));
    Ideal contracted = eliminate(Ideal(E, gens), elim);
    // rename tags back to the source variables
    PolyRing tag_ring(B.ambient().field(), tags);
    std::vector<Polynomial> out;
    for (auto& g : contracted.gens()) {
        Polynomial in_tags = restrict_to(g, tag_ring);
        Polynomial renamed(B.ambient());
        for (auto& [e, c] : in_tags.terms()) renamed.add_term(e, c);
        out.push_back(renamed);
    }
    for (auto& g : B.relations().gens()) out.push_back(g);
    Ideal result(B.ambient(), Ideal(B.ambient(), out).groebner());
    if (!is_proper(result))
        throw std::logic_error("contract_prime: contraction is the unit ideal");
    return PrimeIdeal(result.with_basis(MonomialOrder::grevlex()), Trust::Computed);
}

// §-style local formula report: dim A_q = dim B_p and depth A_q = depth B_p
struct LocalFormulaReport {
    PrimeIdeal q;
    PrimeIdeal p;
    int dim_target = 0, dim_source = 0;
    int depth_target = 0, depth_source = 0;
    bool dims_equal = false, depths_equal = false;
    bool pass = false;
};

inline LocalFormulaReport verify_local_formulas(const EtaleCertificate& cert, const PrimeIdeal& q) {
    if (!cert.covers(q))
        throw std::invalid_argument("certificate does not cover the requested prime");
    const QuotientRing& A = cert.map.target();
    const QuotientRing& B = cert.map.source();
    LocalFormulaReport rep;
    rep.q = q;
    rep.p = contract_prime(cert.map, q);
    rep.dim_target = local_dim(A, q);
    rep.dim_source = local_dim(B, rep.p);
    rep.depth_target = local_depth(Module::free(A, 1), q);
    rep.depth_source = local_depth(Module::free(B, 1), rep.p);
    rep.dims_equal = rep.dim_target == rep.dim_source;
    rep.depths_equal = rep.depth_target == rep.depth_source;
    rep.pass = rep.dims_equal && rep.depths_equal;
    return rep;
}

// nonzerodivisor transport along a ring map certified flat; a failure is a
// witness against flatness, not a silent result
struct NzdTransportReport {
    Polynomial source_element;
    Polynomial image;
    bool pass = false;
    bool nonflat_witness = false;
    std::optional<Polynomial> annihilator_witness;
};

inline NzdTransportReport nzd_transport(const RingMap& f, const Polynomial& b) {
    const QuotientRing& B = f.source();
    const QuotientRing& A = f.target();
    Polynomial br = B.reduce(b);
    if (!is_nonzerodivisor(br, B))
        throw SourceZerodivisor("nzd_transport: source element is a zerodivisor: " + br.to_string());
    NzdTransportReport rep;
    rep.source_element = br;
    rep.image = f.apply(br);
    if (is_nonzerodivisor(rep.image, A)) {
        rep.pass = true;
    } else {
        rep.pass = false;
        rep.nonflat_witness = true;
        rep.annihilator_witness = zerodivisor_witness(rep.image, A);
    }
    return rep;
}

// ---- literal image membership ------------------------------------------------

inline std::vector<Exps> monomials_of_degree_at_most(size_t nvars, int cap) {
    std::vector<Exps> out;
    Exps cur(nvars, 0);
    auto rec = [&](auto&& self, size_t pos, int left) -> void {
        if (pos == nvars) {
            out.push_back(cur);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            cur[pos] = k;
            self(self, pos + 1, left - k);
        }
        cur[pos] = 0;
    };
    rec(rec, 0, cap);
    return out;
}

struct ImageDegreeRecord {
    int degree;
    size_t unknowns;
    size_t equations;
    size_t rank;
    size_t rank_augmented;
};

struct ImageMembershipReport {
    bool in_image = false;
    std::optional<Polynomial> witness; // source element with f(witness) = a
    std::vector<ImageDegreeRecord> records;
};

// decide whether a = f(b) for some source b of degree ≤ bound, by exact
// linear algebra on normal-form coordinates
inline ImageMembershipReport literal_image_membership(const Polynomial& a, const RingMap& f,
                                                      int bound) {
    const QuotientRing& A = f.target();
    const QuotientRing& B = f.source();
    const CoeffField& F = A.field();
    Polynomial target = A.reduce(a);
    ImageMembershipReport rep;
    for (int d = 0; d <= bound; ++d) {
        auto monos = monomials_of_degree_at_most(B.nvars(), d);
        std::vector<Polynomial> images;
        std::map<Exps, size_t> coord;
        auto index_terms = [&](const Polynomial& p) {
            for (auto& [e, c] : p.terms())
                if (!coord.count(e)) coord.emplace(e, coord.size());
        };
        for (auto& m : monos) {
            Polynomial img = f.apply(Polynomial::monomial(B.ambient(), m, 1));
            index_terms(img);
            images.push_back(std::move(img));
        }
        index_terms(target);
        size_t neq = coord.size();
        // rows indexed by coordinates, columns by source monomials
        std::vector<std::vector<Rational>> rows(neq, std::vector<Rational>(monos.size(), 0));
        for (size_t j = 0; j < images.size(); ++j)
            for (auto& [e, c] : images[j].terms()) rows[coord.at(e)][j] = c;
        std::vector<Rational> rhs(neq, 0);
        for (auto& [e, c] : target.terms()) rhs[coord.at(e)] = c;
        LinearSolveResult res = solve_linear(F, rows, rhs, monos.size());
        rep.records.push_back(ImageDegreeRecord{d, monos.size(), neq, res.rank, res.rank_augmented});
        if (res.consistent) {
            Polynomial b(B.ambient());
            for (size_t j = 0; j < monos.size(); ++j) b.add_term(monos[j], res.particular[j]);
            rep.in_image = true;
            rep.witness = B.reduce(b);
            break;
        }
    }
    return rep;
}

// ---- total quotient vs localized saturation ------------------------------------

enum class SaturationVerdict { Equal, Distinct, Unknown };

struct SaturationWitness {
    Polynomial a; // target nonzerodivisor in q
    Polynomial b; // source nonzerodivisor
    Polynomial c; // cofactor with a·c = f(b)·s
    Polynomial s; // unit at q (s = 1 when a divides the image directly)
};

struct SaturationReport {
    SaturationVerdict verdict = SaturationVerdict::Unknown;
    std::vector<SaturationWitness> witnesses;
    std::vector<Polynomial> obstructed; // candidates with a certified bounded obstruction
    std::optional<Polynomial> nonflat_source;      // source nzd with zerodivisor image
    std::optional<Polynomial> nonflat_annihilator; // witness killing the image
};

// deterministic small-coefficient candidates: monomials and ±-pairs of
// monomials of total degree ≤ 2
inline std::vector<Polynomial> small_element_candidates(const PolyRing& r) {
    auto monos = monomials_of_degree_at_most(r.nvars(), 2);
    std::vector<Polynomial> out;
    for (size_t i = 1; i < monos.size(); ++i) // skip the constant monomial
        out.push_back(Polynomial::monomial(r, monos[i], 1));
    for (size_t i = 0; i < monos.size(); ++i)
        for (size_t j = i + 1; j < monos.size(); ++j) {
            out.push_back(Polynomial::monomial(r, monos[i], 1) +
                          Polynomial::monomial(r, monos[j], 1));
            out.push_back(Polynomial::monomial(r, monos[j], 1) -
                          Polynomial::monomial(r, monos[i], 1));
        }
    return out;
}

inline std::vector<Exps> standard_monomials_up_to(const QuotientRing& A, int cap) {
    std::vector<Exps> lts;
    MonomialOrder ord = MonomialOrder::grevlex();
    for (auto& g : A.relation_basis()) lts.push_back(g.leading_term(ord).first);
    std::vector<Exps> out;
    for (auto& e : monomials_of_degree_at_most(A.nvars(), cap)) {
        bool reducible = false;
        for (auto& l : lts)
            if (exps_divides(l, e)) { reducible = true; break; }
        if (!reducible) out.push_back(e);
    }
    return out;
}

inline SaturationReport compare_quotient_saturation(const RingMap& f, const PrimeIdeal& q,
                                                    int bound) {
    const QuotientRing& A = f.target();
    const QuotientRing& B = f.source();
    const CoeffField& F = A.field();
    require_prime_of(A, q);
    SaturationReport rep;

    // a source nonzerodivisor with zerodivisor image certifies a genuine
    // difference: inverting its image collapses the localized ring
    for (auto& b : small_element_candidates(B.ambient())) {
        Polynomial br = B.reduce(b);
        if (br.is_zero() || !is_nonzerodivisor(br, B)) continue;
        Polynomial img = f.apply(br);
        if (img.is_zero() || !is_nonzerodivisor(img, A)) {
            rep.verdict = SaturationVerdict::Distinct;
            rep.nonflat_source = br;
            rep.nonflat_annihilator =
                img.is_zero() ? Polynomial::constant(A.ambient(), 1) : *zerodivisor_witness(img, A);
            return rep;
        }
    }

    auto qgb = q.ideal.groebner();
    auto source_monos = monomials_of_degree_at_most(B.nvars(), bound);
    auto target_monos = standard_monomials_up_to(A, bound);
    size_t nb = source_monos.size(), nc = target_monos.size();

    // precompute monomial images of the map
    std::vector<Polynomial> bimg;
    for (auto& m : source_monos)
        bimg.push_back(f.apply(Polynomial::monomial(B.ambient(), m, 1)));

    // unit-at-q multipliers s: 1 first, then small nonzerodivisors outside q
    std::vector<Polynomial> multipliers = {Polynomial::constant(A.ambient(), 1)};
    for (auto& s : small_element_candidates(A.ambient())) {
        Polynomial sr = A.reduce(s);
        if (sr.is_zero() || normal_form(sr, qgb).is_zero()) continue;
        if (!is_nonzerodivisor(sr, A)) continue;
        multipliers.push_back(sr);
    }

    bool all_witnessed = true;
    for (auto& cand : small_element_candidates(A.ambient())) {
        Polynomial a = A.reduce(cand);
        if (a.is_zero()) continue;
        if (!normal_form(a, qgb).is_zero()) continue; // already a unit at q
        if (!is_nonzerodivisor(a, A)) continue;
        // for each multiplier s, solve a·c = f(b)·s over coefficients of c and b;
        // a solution with b a source nonzerodivisor inverts a in T_B^{-1}A_q
        bool found = false;
        for (auto& s : multipliers) {
            std::map<Exps, size_t> coord;
            auto index_terms = [&](const Polynomial& p) {
                for (auto& [e, c2] : p.terms())
                    if (!coord.count(e)) coord.emplace(e, coord.size());
            };
            std::vector<Polynomial> lhs, rhs;
            for (auto& m : target_monos) {
                Polynomial prod = A.reduce(a * Polynomial::monomial(A.ambient(), m, 1));
                index_terms(prod);
                lhs.push_back(std::move(prod));
            }
            for (size_t j = 0; j < nb; ++j) {
                Polynomial img = A.reduce(bimg[j] * s);
                index_terms(img);
                rhs.push_back(std::move(img));
            }
            FieldMatrix mat(F, nc + nb);
            std::vector<std::vector<Rational>> rows(coord.size(),
                                                    std::vector<Rational>(nc + nb, 0));
            for (size_t j = 0; j < nc; ++j)
                for (auto& [e, c2] : lhs[j].terms()) rows[coord.at(e)][j] = c2;
            for (size_t j = 0; j < nb; ++j)
                for (auto& [e, c2] : rhs[j].terms()) rows[coord.at(e)][nc + j] = F.neg(c2);
            for (auto& r : rows) mat.add_row(std::move(r));
            mat.rref();
            for (auto& v : mat.nullspace_basis()) {
                Polynomial b(B.ambient());
                for (size_t j = 0; j < nb; ++j) b.add_term(source_monos[j], v[nc + j]);
                Polynomial br = B.reduce(b);
                if (br.is_zero() || !is_nonzerodivisor(br, B)) continue;
                Polynomial c(A.ambient());
                for (size_t j = 0; j < nc; ++j) c.add_term(target_monos[j], v[j]);
                // normalize: make c monic when nonzero
                Polynomial cr = A.reduce(c);
                if (!cr.is_zero()) {
                    Rational inv = F.inv(cr.leading_term(MonomialOrder::grevlex()).second);
                    cr = cr.scaled(inv);
                    br = br.scaled(inv);
                }
                rep.witnesses.push_back(SaturationWitness{a, br, cr, s});
                found = true;
                break;
            }
            if (found) break;
        }
        if (!found) {
            all_witnessed = false;
            rep.obstructed.push_back(a);
        }
    }
    rep.verdict = all_witnessed ? SaturationVerdict::Equal : SaturationVerdict::Unknown;
    return rep;
}

// ---- pullback checks ------------------------------------------------------------

struct ReflexivePullbackReport {
    ReflexivityCert source_cert;
    ReflexivityCert pullback_cert;
    bool pass = false;
};

inline ReflexivePullbackReport reflexive_pullback_check(const EtaleCertificate& cert,
                                                        const Module& M) {
    ReflexivePullbackReport rep;
    rep.source_cert = is_reflexive(M);
    if (!rep.source_cert.reflexive)
        throw SourceNotReflexive("reflexive_pullback_check: source module is not reflexive");
    Module N = base_change(M, cert.map);
    rep.pullback_cert = is_reflexive(N);
    rep.pass = rep.pullback_cert.reflexive;
    return rep;
}

struct HomPullbackReport {
    ModuleMap comparison; // base_change(dual(M)) -> dual(base_change(M))
    IsoVerdict verdict;
};

inline HomPullbackReport hom_pullback_check(const RingMap& f, const Module& M) {
    const QuotientRing& A = f.target();
    HomModule dB = dual(M);
    Module lhs = base_change(dB.module, f);
    Module MA = base_change(M, f);
    HomModule dA = dual(MA);
    // the canonical map sends phi ⊗ 1 to f(phi), expressed in dA's generators
    std::vector<std::vector<Polynomial>> cols;
    for (auto& psi : dA.gen_maps) {
        std::vector<Polynomial> col;
        for (size_t j = 0; j < MA.gens(); ++j) col.push_back(psi.at(0, j));
        cols.push_back(std::move(col));
    }
    ASolver solver(A, MA.gens(), cols);
    PolyMatrix cmp(A.ambient(), dA.module.gens(), lhs.gens());
    for (size_t i = 0; i < lhs.gens(); ++i) {
        std::vector<Polynomial> v;
        for (size_t j = 0; j < M.gens(); ++j) v.push_back(f.apply(dB.gen_maps[i].at(0, j)));
        auto cof = solver.lift(v);
        if (!cof)
            throw std::logic_error("hom_pullback_check: canonical functional failed to lift");
        for (size_t m = 0; m < dA.module.gens(); ++m) cmp.at(m, i) = (*cof)[m];
    }
    HomPullbackReport rep{ModuleMap(lhs, dA.module, cmp), IsoVerdict{}};
    rep.verdict = is_iso(rep.comparison);
    return rep;
}

} // namespace gendiv
