#pragma once

#include "gendiv/document.hpp"

#include <json.hpp>

#include <future>

namespace gendiv {

using Json = nlohmann::json;

enum class CheckVerdict { Pass, Fail, Unknown, Error };

inline const char* verdict_name(CheckVerdict v) {
    switch (v) {
    case CheckVerdict::Pass: return "PASS";
    case CheckVerdict::Fail: return "FAIL";
    case CheckVerdict::Unknown: return "UNKNOWN";
    case CheckVerdict::Error: return "ERROR";
    }
    return "?";
}

struct CheckEntry {
    std::string name;
    CheckVerdict verdict = CheckVerdict::Error;
    std::string detail;
    Json certificate = Json::object();
};

struct RunOptions {
    int bound = -1;          // global default for assertions without a bound
    bool trust_primes = false;
    int jobs = 1;
};

struct Report {
    std::vector<CheckEntry> entries;
    RunOptions options;
    std::string document_text;

    size_t count(CheckVerdict v) const {
        size_t k = 0;
        for (auto& e : entries)
            if (e.verdict == v) ++k;
        return k;
    }

    int exit_code() const {
        if (count(CheckVerdict::Fail) > 0 || count(CheckVerdict::Error) > 0) return 1;
        if (count(CheckVerdict::Unknown) > 0) return 2;
        return 0;
    }
};

// ---- helpers --------------------------------------------------------------------

inline Json ideal_json(const Ideal& I) {
    Json out = Json::array();
    for (auto& g : I.groebner()) out.push_back(g.to_string());
    return out;
}

inline Json poly_vec_json(const std::vector<Polynomial>& v) {
    Json out = Json::array();
    for (auto& p : v) out.push_back(p.to_string());
    return out;
}

inline Json matrix_json(const PolyMatrix& m) {
    Json out = Json::array();
    for (size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (size_t j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).to_string());
        out.push_back(row);
    }
    return out;
}

inline Json iso_json(const IsoVerdict& v) {
    Json out;
    out["iso"] = v.iso;
    if (v.kernel_witness) out["kernel_witness"] = poly_vec_json(*v.kernel_witness);
    if (v.cokernel_witness) out["cokernel_witness"] = poly_vec_json(*v.cokernel_witness);
    return out;
}

// default degree bound: 2 × (max degree among map images and relations) + 2
inline int default_bound_for(const RingMap& f) {
    int d = 1;
    for (auto& im : f.images()) d = std::max(d, im.degree());
    for (auto& rel : f.target().relation_basis()) d = std::max(d, rel.degree());
    for (auto& rel : f.source().relation_basis()) d = std::max(d, rel.degree());
    return 2 * d + 2;
}

inline int default_bound_for(const Module& M) {
    int d = 1;
    for (size_t i = 0; i < M.rel().rows(); ++i)
        for (size_t j = 0; j < M.rel().cols(); ++j) d = std::max(d, M.rel().at(i, j).degree());
    for (auto& rel : M.ring().relation_basis()) d = std::max(d, rel.degree());
    return 2 * d + 2;
}

// ---- the assertion executor ------------------------------------------------------

class Runner {
public:
    Runner(const Document& doc, RunOptions opts) : doc_(doc), opts_(opts) {}

    Report run() const {
        if (doc_.has_trusted_primes && !opts_.trust_primes)
            throw std::invalid_argument(
                "document declares trusted primes; pass --trust-primes to accept them");
        Report rep;
        rep.options = opts_;
        rep.document_text = doc_.source;
        size_t n = doc_.assertions.size();
        rep.entries.resize(n);
        if (opts_.jobs > 1) {
            std::vector<std::future<CheckEntry>> futures;
            for (size_t i = 0; i < n; ++i)
                futures.push_back(std::async(std::launch::async,
                                             [this, i] { return execute(doc_.assertions[i]); }));
            for (size_t i = 0; i < n; ++i) rep.entries[i] = futures[i].get();
        } else {
            for (size_t i = 0; i < n; ++i) rep.entries[i] = execute(doc_.assertions[i]);
        }
        return rep;
    }

    CheckEntry execute(const Assertion& a) const {
        CheckEntry e;
        e.name = a.kind;
        try {
            dispatch(a, e);
        } catch (const NotReflexive& ex) {
            settle_typed(a, e, ex.what());
        } catch (const WrongGenericRank& ex) {
            settle_typed(a, e, ex.what());
        } catch (const CocycleFailure& ex) {
            settle_typed(a, e, ex.what());
        } catch (const DualCocycleFailure& ex) {
            settle_typed(a, e, ex.what());
        } catch (const NotInvariant& ex) {
            settle_typed(a, e, ex.what());
        } catch (const DegenerateSection& ex) {
            settle_typed(a, e, ex.what());
        } catch (const Degenerate& ex) {
            settle_typed(a, e, ex.what());
        } catch (const EmbeddedPoint& ex) {
            settle_typed(a, e, ex.what());
        } catch (const std::exception& ex) {
            e.verdict = CheckVerdict::Error;
            e.detail = ex.what();
        }
        return e;
    }

private:
    // a typed domain failure: the expected outcome for negated assertions
    void settle_typed(const Assertion& a, CheckEntry& e, const std::string& what) const {
        e.verdict = a.negated ? CheckVerdict::Pass : CheckVerdict::Fail;
        e.detail = what;
    }

    void settle_bool(const Assertion& a, CheckEntry& e, bool value,
                     const std::string& detail) const {
        e.verdict = (value != a.negated) ? CheckVerdict::Pass : CheckVerdict::Fail;
        e.detail = detail;
    }

    const Module& module_ref(const std::string& name) const {
        return doc_.modules.at(name).second;
    }
    const PrimeIdeal& prime_ref(const std::string& name) const {
        return doc_.primes.at(name).second;
    }

    int bound_or_default(const Assertion& a, size_t idx, int fallback) const {
        if (a.numbers.size() > idx && a.numbers[idx] >= 0) return a.numbers[idx];
        if (opts_.bound >= 0) return opts_.bound;
        return fallback;
    }

    void dispatch(const Assertion& a, CheckEntry& e) const {
        if (a.kind == "member") {
            const Ideal& I = doc_.ideals.at(a.refs[0]).second;
            bool in = is_member(a.polys[0], I);
            if (in) {
                SubmoduleSolver solver(I.ambient(), 1, [&] {
                    std::vector<VecPoly> cols;
                    for (auto& g : I.gens()) cols.push_back({g});
                    return cols;
                }());
                auto cof = solver.lift({a.polys[0]});
                if (cof) e.certificate["cofactors"] = poly_vec_json(*cof);
            } else {
                e.certificate["normal_form"] = normal_form(a.polys[0], I.groebner()).to_string();
            }
            settle_bool(a, e, in, a.polys[0].to_string() + (in ? " in " : " not in ") + a.refs[0]);
        } else if (a.kind == "unit") {
            const QuotientRing& A = doc_.rings.at(a.refs[0]);
            settle_bool(a, e, A.is_unit(a.polys[0]), a.polys[0].to_string());
        } else if (a.kind == "nzd") {
            const QuotientRing& A = doc_.rings.at(a.refs[0]);
            bool nzd = is_nonzerodivisor(a.polys[0], A);
            if (!nzd) {
                auto w = zerodivisor_witness(a.polys[0], A);
                if (w) e.certificate["annihilator_witness"] = w->to_string();
            }
            settle_bool(a, e, nzd, a.polys[0].to_string());
        } else if (a.kind == "dim") {
            const QuotientRing& A = doc_.rings.at(a.refs[0]);
            int d = krull_dimension(A.relations());
            e.certificate["dimension"] = d;
            settle_bool(a, e, d == a.numbers[0],
                        "dim " + a.refs[0] + " = " + std::to_string(d));
        } else if (a.kind == "localdim") {
            const QuotientRing& A = doc_.rings.at(a.refs[0]);
            int d = local_dim(A, prime_ref(a.refs[1]));
            e.certificate["dimension"] = d;
            settle_bool(a, e, d == a.numbers[0], "dim at " + a.refs[1] + " = " + std::to_string(d));
        } else if (a.kind == "depth") {
            Module M = doc_.modules.count(a.refs[0])
                           ? module_ref(a.refs[0])
                           : Module::free(doc_.rings.at(a.refs[0]), 1);
            int d = local_depth(M, prime_ref(a.refs[1]));
            e.certificate["depth"] = d;
            settle_bool(a, e, d == a.numbers[0],
                        "depth at " + a.refs[1] + " = " + std::to_string(d));
        } else if (a.kind == "gorenstein") {
            const QuotientRing& A = doc_.rings.at(a.refs[0]);
            bool g = is_gorenstein_at(A, prime_ref(a.refs[1]));
            settle_bool(a, e, g, a.refs[0] + " at " + a.refs[1]);
        } else if (a.kind == "gr" || a.kind == "sr") {
            run_condition(a, e);
        } else if (a.kind == "minimalprimes") {
            const QuotientRing& A = doc_.rings.at(a.refs[0]);
            auto ps = ring_minimal_primes(A);
            bool match = ps.size() == a.refs.size() - 1;
            Json cert = Json::array();
            for (auto& p : ps) cert.push_back(ideal_json(p.ideal));
            e.certificate["computed"] = cert;
            for (size_t i = 1; i < a.refs.size() && match; ++i) {
                bool found = false;
                for (auto& p : ps)
                    if (ideal_equal(p.ideal, prime_ref(a.refs[i]).ideal)) found = true;
                match = match && found;
            }
            settle_bool(a, e, match, std::to_string(ps.size()) + " minimal primes");
        } else if (a.kind == "associated") {
            const Module& M = module_ref(a.refs[0]);
            auto ass = associated_primes(M);
            bool match = ass.size() == a.refs.size() - 1;
            Json cert = Json::array();
            for (auto& p : ass) cert.push_back(ideal_json(p.ideal));
            e.certificate["computed"] = cert;
            for (size_t i = 1; i < a.refs.size() && match; ++i) {
                bool found = false;
                for (auto& p : ass)
                    if (ideal_equal(p.ideal, prime_ref(a.refs[i]).ideal)) found = true;
                match = match && found;
            }
            settle_bool(a, e, match, std::to_string(ass.size()) + " associated primes");
        } else if (a.kind == "embedded") {
            const Module& M = module_ref(a.refs[0]);
            auto rep = has_embedded_points(M);
            if (rep.witness) e.certificate["witness"] = ideal_json(rep.witness->ideal);
            settle_bool(a, e, rep.has_embedded,
                        rep.has_embedded ? "embedded point found" : "no embedded points");
        } else if (a.kind == "reflexive") {
            const Module& M = module_ref(a.refs[0]);
            auto cert = is_reflexive(M);
            e.certificate["biduality"] = iso_json(cert.verdict);
            settle_bool(a, e, cert.reflexive, cert.verdict.to_string());
        } else if (a.kind == "etale") {
            const EtaleCertificate& cert = doc_.etales.at(a.refs[0]);
            bool covered = a.refs.size() < 2 ? cert.scope == EtaleScope::Global
                                             : cert.covers(prime_ref(a.refs[1]));
            e.certificate["jacobian"] = cert.jacobian.to_string();
            e.certificate["scope"] = cert.scope == EtaleScope::Global ? "GLOBAL" : "AT_PRIMES";
            settle_bool(a, e, covered,
                        cert.scope == EtaleScope::Global ? "global certificate"
                                                         : "certificate at listed primes");
        } else if (a.kind == "contract") {
            PrimeIdeal p = contract_prime(doc_.ring_maps.at(a.refs[0]), prime_ref(a.refs[1]));
            e.certificate["contraction"] = ideal_json(p.ideal);
            settle_bool(a, e, ideal_equal(p.ideal, prime_ref(a.refs[2]).ideal),
                        "contraction of " + a.refs[1]);
        } else if (a.kind == "localformulas") {
            LocalFormulaReport rep =
                verify_local_formulas(doc_.etales.at(a.refs[0]), prime_ref(a.refs[1]));
            e.certificate["dim_source"] = rep.dim_source;
            e.certificate["dim_target"] = rep.dim_target;
            e.certificate["depth_source"] = rep.depth_source;
            e.certificate["depth_target"] = rep.depth_target;
            settle_bool(a, e, rep.pass,
                        "dim " + std::to_string(rep.dim_target) + "=" +
                            std::to_string(rep.dim_source) + " depth " +
                            std::to_string(rep.depth_target) + "=" +
                            std::to_string(rep.depth_source));
        } else if (a.kind == "nzdtransport") {
            NzdTransportReport rep = nzd_transport(doc_.ring_maps.at(a.refs[0]), a.polys[0]);
            e.certificate["image"] = rep.image.to_string();
            if (rep.annihilator_witness)
                e.certificate["nonflat_witness"] = rep.annihilator_witness->to_string();
            settle_bool(a, e, rep.pass,
                        rep.pass ? "image is a nonzerodivisor" : "NonFlatWitness");
        } else if (a.kind == "nonflat") {
            NzdTransportReport rep = nzd_transport(doc_.ring_maps.at(a.refs[0]), a.polys[0]);
            if (rep.annihilator_witness)
                e.certificate["nonflat_witness"] = rep.annihilator_witness->to_string();
            settle_bool(a, e, rep.nonflat_witness,
                        rep.nonflat_witness ? "NonFlatWitness " +
                                                  rep.annihilator_witness->to_string()
                                            : "image stayed regular");
        } else if (a.kind == "image") {
            const RingMap& f = doc_.ring_maps.at(a.refs[0]);
            int bound = bound_or_default(a, 0, default_bound_for(f));
            ImageMembershipReport rep = literal_image_membership(a.polys[0], f, bound);
            if (rep.witness) e.certificate["witness"] = rep.witness->to_string();
            Json records = Json::array();
            for (auto& r : rep.records) {
                Json rec;
                rec["degree"] = r.degree;
                rec["equations"] = r.equations;
                rec["rank"] = r.rank;
                rec["rank_augmented"] = r.rank_augmented;
                rec["unknowns"] = r.unknowns;
                records.push_back(rec);
            }
            e.certificate["records"] = records;
            settle_bool(a, e, rep.in_image,
                        rep.in_image ? "IN_IMAGE " + rep.witness->to_string() : "NOT_IN_IMAGE");
        } else if (a.kind == "saturation") {
            const RingMap& f = doc_.ring_maps.at(a.refs[0]);
            int bound = bound_or_default(a, 0, default_bound_for(f));
            SaturationReport rep = compare_quotient_saturation(f, prime_ref(a.refs[1]), bound);
            Json ws = Json::array();
            for (auto& w : rep.witnesses) {
                Json j;
                j["a"] = w.a.to_string();
                j["b"] = w.b.to_string();
                j["c"] = w.c.to_string();
                j["s"] = w.s.to_string();
                ws.push_back(j);
            }
            e.certificate["witnesses"] = ws;
            e.certificate["obstructed"] = poly_vec_json(rep.obstructed);
            std::string got = rep.verdict == SaturationVerdict::Equal      ? "equal"
                              : rep.verdict == SaturationVerdict::Distinct ? "distinct"
                                                                           : "unknown";
            if (got == a.expect) {
                e.verdict = CheckVerdict::Pass;
            } else if (got == "unknown") {
                e.verdict = CheckVerdict::Unknown;
            } else {
                e.verdict = CheckVerdict::Fail;
            }
            e.detail = got;
        } else if (a.kind == "divisor") {
            GeneralizedDivisor D = validate_divisor(module_ref(a.refs[0]));
            e.certificate["biduality"] = iso_json(D.reflexivity.verdict);
            Json rc = Json::array();
            for (auto& [eta, ok] : D.rank_checks) {
                Json j;
                j["generic_point"] = ideal_json(eta.ideal);
                j["rank_one"] = ok;
                rc.push_back(j);
            }
            e.certificate["rank_checks"] = rc;
            settle_bool(a, e, true, "valid generalized divisor");
        } else if (a.kind == "effective") {
            GeneralizedDivisor D = validate_divisor(module_ref(a.refs[0]));
            bool eff = is_effective(D);
            bool match = false;
            if (eff) {
                Ideal expected(D.F.ring().ambient(), a.poly_groups[0]);
                std::vector<Polynomial> with_rels = expected.gens();
                for (auto& g : D.F.ring().relations().gens()) with_rels.push_back(g);
                match = ideal_equal(D.effective->image,
                                    Ideal(D.F.ring().ambient(), with_rels));
                e.certificate["image"] = ideal_json(D.effective->image);
                e.certificate["at_element"] = poly_vec_json(D.effective->at_element);
            }
            settle_bool(a, e, eff && match,
                        eff ? "image ideal computed" : "no effective embedding found");
        } else if (a.kind == "subscheme") {
            GeneralizedDivisor D = validate_divisor(module_ref(a.refs[0]));
            if (!is_effective(D)) {
                settle_bool(a, e, false, "no effective embedding found");
                return;
            }
            SubschemeReport rep = effective_to_subscheme(D);
            Ideal expected(D.F.ring().ambient(), a.poly_groups[0]);
            std::vector<Polynomial> with_rels = expected.gens();
            for (auto& g : D.F.ring().relations().gens()) with_rels.push_back(g);
            bool match = ideal_equal(rep.ideal, Ideal(D.F.ring().ambient(), with_rels));
            e.certificate["ideal"] = ideal_json(rep.ideal);
            Json ass = Json::array();
            for (auto& p : rep.embedded.associated) ass.push_back(ideal_json(p.ideal));
            e.certificate["associated"] = ass;
            e.certificate["no_embedded_points"] = !rep.embedded.has_embedded;
            settle_bool(a, e, match, "subscheme ideal with no embedded points");
        } else if (a.kind == "nondegenerate") {
            const Module& M = module_ref(a.refs[0]);
            bool nd = nondegenerate_section(M, a.poly_groups[0]);
            settle_bool(a, e, nd, nd ? "generates all generic stalks" : "degenerate section");
        } else if (a.kind == "sectionimage") {
            GeneralizedDivisor D = validate_divisor(module_ref(a.refs[0]));
            GeneralizedDivisor E = section_to_effective(D, a.poly_groups[0]);
            Ideal expected(D.F.ring().ambient(), a.poly_groups[1]);
            std::vector<Polynomial> with_rels = expected.gens();
            for (auto& g : D.F.ring().relations().gens()) with_rels.push_back(g);
            bool match = ideal_equal(E.effective->image, Ideal(D.F.ring().ambient(), with_rels));
            e.certificate["image"] = ideal_json(E.effective->image);
            settle_bool(a, e, match, "section image ideal");
        } else if (a.kind == "lineq") {
            GeneralizedDivisor D1 = validate_divisor(module_ref(a.refs[0]));
            GeneralizedDivisor D2 = validate_divisor(module_ref(a.refs[1]));
            int bound = bound_or_default(a, 0, 2);
            EquivalenceReport rep = linear_equivalence(D1, D2, bound);
            std::string got = rep.verdict == EquivalenceVerdict::Equivalent ? "equivalent"
                              : rep.verdict == EquivalenceVerdict::Not      ? "not"
                                                                            : "unknown";
            if (rep.forward) e.certificate["forward"] = matrix_json(*rep.forward);
            if (rep.backward) e.certificate["backward"] = matrix_json(*rep.backward);
            if (rep.obstruction) {
                e.certificate["obstruction"] = ideal_json(rep.obstruction->ideal);
                e.certificate["local_generators"] = Json::array({rep.mu1, rep.mu2});
            }
            if (got == a.expect) {
                e.verdict = CheckVerdict::Pass;
            } else if (got == "unknown") {
                e.verdict = CheckVerdict::Unknown;
            } else {
                e.verdict = CheckVerdict::Fail;
            }
            e.detail = got;
        } else if (a.kind == "groupoid") {
            // construction already validated all certificates at parse time
            settle_bool(a, e, doc_.actions.count(a.refs[0]) > 0,
                        "automorphisms and table verified");
        } else if (a.kind == "cocycle") {
            const EquivariantModule& E = doc_.equivariants.at(a.refs[0]);
            CocycleCert cert = check_cocycle(E);
            Json inv = Json::array();
            for (auto& v : cert.invertibility) inv.push_back(iso_json(v));
            e.certificate["invertibility"] = inv;
            settle_bool(a, e, cert.pass, "cocycle identities verified");
        } else if (a.kind == "stackdivisor") {
            const EquivariantModule& E = doc_.equivariants.at(a.refs[0]);
            StackDivisor D = validate_stack_divisor(E);
            e.certificate["biduality"] = iso_json(D.divisor.reflexivity.verdict);
            Json duals = Json::array();
            for (auto& m : D.dual_action_mats) duals.push_back(matrix_json(m));
            e.certificate["dual_action"] = duals;
            settle_bool(a, e, true, "valid stack divisor with dual cocycle");
        } else if (a.kind == "invariants") {
            const EquivariantModule& E = doc_.equivariants.at(a.refs[0]);
            int bound = bound_or_default(a, 0, default_bound_for(E.module));
            auto sections = invariant_sections(E, bound);
            std::multiset<std::string> got, want;
            Json basis = Json::array();
            for (auto& s : sections) {
                std::string repr = s.realized ? s.realized->to_string() : [&] {
                    std::string t = "(";
                    for (size_t i = 0; i < s.coords.size(); ++i)
                        t += (i ? "; " : "") + s.coords[i].to_string();
                    return t + ")";
                }();
                got.insert(repr);
                basis.push_back(repr);
            }
            for (auto& p : a.poly_groups[0]) want.insert(p.to_string());
            e.certificate["basis"] = basis;
            settle_bool(a, e, got == want, std::to_string(sections.size()) + " invariant sections");
        } else if (a.kind == "substack") {
            const EquivariantModule& E = doc_.equivariants.at(a.refs[0]);
            StackDivisor D = validate_stack_divisor(E);
            SubstackReport rep = stack_effective_to_substack(D);
            Ideal expected(E.groupoid.chart().ambient(), a.poly_groups[0]);
            std::vector<Polynomial> with_rels = expected.gens();
            for (auto& g : E.groupoid.chart().relations().gens()) with_rels.push_back(g);
            bool match =
                ideal_equal(rep.ideal, Ideal(E.groupoid.chart().ambient(), with_rels));
            e.certificate["ideal"] = ideal_json(rep.ideal);
            Json inv = Json::array();
            for (auto& [g, ok] : rep.invariance) {
                Json j;
                j["element"] = g;
                j["invariant"] = ok;
                inv.push_back(j);
            }
            e.certificate["invariance"] = inv;
            e.certificate["no_embedded_points"] = !rep.chart_report.embedded.has_embedded;
            settle_bool(a, e, match, "invariant substack ideal");
        } else if (a.kind == "stacksection") {
            const EquivariantModule& E = doc_.equivariants.at(a.refs[0]);
            StackDivisor D = validate_stack_divisor(E);
            StackDivisor eff = section_to_stack_effective(D, a.poly_groups[0]);
            Ideal expected(E.groupoid.chart().ambient(), a.poly_groups[1]);
            std::vector<Polynomial> with_rels = expected.gens();
            for (auto& g : E.groupoid.chart().relations().gens()) with_rels.push_back(g);
            bool match = ideal_equal(eff.divisor.effective->image,
                                     Ideal(E.groupoid.chart().ambient(), with_rels));
            e.certificate["image"] = ideal_json(eff.divisor.effective->image);
            settle_bool(a, e, match, "invariant section image ideal");
        } else {
            throw std::logic_error("unhandled assertion kind " + a.kind);
        }
    }

    void run_condition(const Assertion& a, CheckEntry& e) const {
        const std::string& subject = a.refs[0];
        std::optional<Module> M;
        QuotientRing A;
        if (doc_.modules.count(subject)) {
            M = module_ref(subject);
            A = M->ring();
        } else {
            A = doc_.rings.at(subject);
        }
        std::vector<PrimeIdeal> primes;
        for (size_t i = 2; i < a.refs.size(); ++i) primes.push_back(prime_ref(a.refs[i]));
        ConditionReport rep = condition_report(
            A, M, a.kind == "gr" ? ConditionKind::Gr : ConditionKind::Sr, a.numbers[0], primes,
            a.exhaustive, subject);
        Json checks = Json::array();
        for (auto& c : rep.checks) {
            Json j;
            j["prime"] = ideal_json(c.prime.ideal);
            j["trust"] = trust_name(c.prime.trust);
            j["dim"] = c.dim;
            if (a.kind == "sr" && c.checked) j["depth"] = c.depth;
            if (a.kind == "gr") j["checked"] = c.checked;
            j["ok"] = c.ok;
            checks.push_back(j);
        }
        e.certificate["checks"] = checks;
        std::string verdict_str = rep.verdict == Verdict::Pass      ? "PASS"
                                  : rep.verdict == Verdict::Partial ? "PARTIAL"
                                                                    : "FAIL";
        std::string detail = verdict_str;
        if (!rep.note.empty()) detail += " (" + rep.note + ")";
        settle_bool(a, e, rep.verdict != Verdict::Fail, detail);
    }

    const Document& doc_;
    RunOptions opts_;
};

// ---- emission ---------------------------------------------------------------------

inline std::string emit_text(const Report& rep) {
    std::string out;
    for (auto& e : rep.entries) {
        std::string detail = e.detail;
        for (auto& c : detail)
            if (c == '\n') c = ' ';
        out += "CHECK " + e.name + " " + verdict_name(e.verdict) +
               (detail.empty() ? "" : " " + detail) + "\n";
    }
    out += "SUMMARY pass=" + std::to_string(rep.count(CheckVerdict::Pass)) +
           " fail=" + std::to_string(rep.count(CheckVerdict::Fail)) +
           " unknown=" + std::to_string(rep.count(CheckVerdict::Unknown)) +
           " error=" + std::to_string(rep.count(CheckVerdict::Error)) + "\n";
    return out;
}

inline Json report_json(const Report& rep) {
    Json out;
    out["tool"] = "gendiv";
    out["version"] = "1.0.0";
    out["document"] = rep.document_text;
    out["options"]["bound"] = rep.options.bound;
    out["options"]["trust_primes"] = rep.options.trust_primes;
    Json entries = Json::array();
    for (auto& e : rep.entries) {
        Json j;
        j["name"] = e.name;
        j["verdict"] = verdict_name(e.verdict);
        j["detail"] = e.detail;
        j["certificate"] = e.certificate;
        entries.push_back(j);
    }
    out["entries"] = entries;
    out["summary"]["pass"] = rep.count(CheckVerdict::Pass);
    out["summary"]["fail"] = rep.count(CheckVerdict::Fail);
    out["summary"]["unknown"] = rep.count(CheckVerdict::Unknown);
    out["summary"]["error"] = rep.count(CheckVerdict::Error);
    return out;
}

inline std::string emit_json(const Report& rep) { return report_json(rep).dump(2) + "\n"; }

// re-parse the embedded document, re-run deterministically, and compare the
// serialized entries byte for byte; membership certificates are re-multiplied
// directly as an extra independent check
struct RecheckResult {
    bool ok = false;
    std::string message;
};

inline RecheckResult recheck_report(const Json& stored) {
    RecheckResult res;
    if (!stored.contains("document") || !stored.contains("entries")) {
        res.message = "malformed report: missing document or entries";
        return res;
    }
    Document doc = parse_document(stored.at("document").get<std::string>());
    RunOptions opts;
    opts.bound = stored.at("options").at("bound").get<int>();
    opts.trust_primes = stored.at("options").at("trust_primes").get<bool>();
    Report rerun = Runner(doc, opts).run();
    Json fresh = report_json(rerun);
    if (fresh.at("entries").dump() != stored.at("entries").dump()) {
        res.message = "entries differ from a deterministic re-run";
        return res;
    }
    if (fresh.at("summary").dump() != stored.at("summary").dump()) {
        res.message = "summary differs from a deterministic re-run";
        return res;
    }
    // independent re-verification of membership certificates
    size_t idx = 0;
    for (auto& entry : stored.at("entries")) {
        const Assertion& a = doc.assertions.at(idx);
        if (entry.at("name") == "member" && entry.at("certificate").contains("cofactors")) {
            const Ideal& I = doc.ideals.at(a.refs[0]).second;
            Polynomial sum(I.ambient());
            size_t k = 0;
            for (auto& cs : entry.at("certificate").at("cofactors")) {
                Polynomial c = parse_poly(I.ambient(), cs.get<std::string>());
                sum = sum + c * I.gens()[k++];
            }
            if (!(sum == a.polys[0])) {
                res.message = "membership cofactor certificate failed to re-multiply";
                return res;
            }
        }
        ++idx;
    }
    res.ok = true;
    res.message = "all entries re-validated";
    return res;
}

// ---- canonical reprint --------------------------------------------------------------

inline std::string field_token(const CoeffField& F) {
    return F.is_rationals() ? "Q" : "Fp " + std::to_string(F.characteristic());
}

inline std::string render_poly_list(const std::vector<Polynomial>& ps) {
    std::string out = "(";
    for (size_t i = 0; i < ps.size(); ++i) out += (i ? ", " : "") + ps[i].to_string();
    return out + ")";
}

inline std::string format_document(const Document& doc) {
    std::string out;
    for (auto& d : doc.order) {
        if (d.kind == "field") {
            out += "field " + d.name + " = " + field_token(doc.fields.at(d.name)) + "\n";
        } else if (d.kind == "ring") {
            const QuotientRing& A = doc.rings.at(d.name);
            std::string vars;
            for (size_t i = 0; i < A.nvars(); ++i) vars += (i ? ", " : "") + A.ambient().var(i);
            std::string ftok = A.field().is_rationals()
                                   ? "Q"
                                   : "Fp" + std::to_string(A.field().characteristic());
            out += "ring " + d.name + " = " + ftok + "[" + vars + "]";
            if (!A.is_polynomial_ring()) out += " / " + render_poly_list(A.relation_basis());
            out += "\n";
        } else if (d.kind == "ideal") {
            auto& [rname, I] = doc.ideals.at(d.name);
            out += "ideal " + d.name + " in " + rname + " = " + render_poly_list(I.gens()) + "\n";
        } else if (d.kind == "prime") {
            auto& [rname, p] = doc.primes.at(d.name);
            out += "prime " + d.name + " in " + rname + " = " +
                   render_poly_list(p.ideal.groebner());
            if (p.trust == Trust::Trusted) out += " trusted";
            out += "\n";
        } else if (d.kind == "module") {
            auto& [rname, M] = doc.modules.at(d.name);
            out += "module " + d.name + " over " + rname + " = ";
            if (M.realization()) {
                out += "ideal " + render_poly_list(*M.realization());
            } else {
                out += "coker [[";
                for (size_t i = 0; i < M.rel().rows(); ++i) {
                    if (i) out += "; ";
                    for (size_t j = 0; j < M.rel().cols(); ++j)
                        out += (j ? ", " : "") + M.rel().at(i, j).to_string();
                }
                out += "]] gens " + std::to_string(M.gens());
            }
            out += "\n";
        } else if (d.kind == "map") {
            const RingMap& f = doc.ring_maps.at(d.name);
            out += "map " + d.name + " : " + f.source().name() + " -> " + f.target().name() + " on ";
            for (size_t i = 0; i < f.source().nvars(); ++i)
                out += (i ? ", " : "") + f.source().ambient().var(i) + " -> " +
                       f.images()[i].to_string();
            out += "\n";
        } else if (d.kind == "etale") {
            const EtaleCertificate& c = doc.etales.at(d.name);
            std::string vars;
            for (size_t i = 0; i < c.presentation_vars.size(); ++i)
                vars += (i ? ", " : "") + c.presentation_vars[i];
            auto& [map_name, prime_names] = doc.etale_refs.at(d.name);
            out += "etale " + d.name + " of " + map_name + " vars (" + vars + ") presentation " +
                   render_poly_list(c.presentation_rels) + " jacobian (" +
                   c.jacobian.to_string() + ")";
            if (!prime_names.empty()) {
                out += " at (";
                for (size_t i = 0; i < prime_names.size(); ++i)
                    out += (i ? ", " : "") + prime_names[i];
                out += ")";
            }
            out += "\n";
        } else if (d.kind == "group") {
            const GroupTable& G = doc.groups.at(d.name);
            out += "group " + d.name + " = table{";
            for (size_t i = 0; i < G.size(); ++i) {
                if (i) out += "; ";
                for (size_t j = 0; j < G.size(); ++j)
                    out += (j ? ", " : "") + G.name(G.mul(i, j));
            }
            out += "}\n";
        } else if (d.kind == "action") {
            const GroupGroupoid& G = doc.actions.at(d.name);
            out += "action " + d.name + " of " + doc.action_refs.at(d.name) + " on " +
                   G.chart().name() + " : ";
            for (size_t g = 0; g < G.group().size(); ++g) {
                if (g) out += "; ";
                out += G.group().name(g) + ": ";
                for (size_t i = 0; i < G.chart().nvars(); ++i)
                    out += (i ? ", " : "") + G.chart().ambient().var(i) + " -> " +
                           G.act(g).images()[i].to_string();
            }
            out += "\n";
        } else if (d.kind == "equivariant") {
            const EquivariantModule& E = doc.equivariants.at(d.name);
            auto& [mod_name, act_name] = doc.equivariant_refs.at(d.name);
            out += "equivariant " + d.name + " = " + mod_name + " with " + act_name + " : ";
            for (size_t g = 0; g < E.groupoid.group().size(); ++g) {
                if (g) out += "; ";
                out += E.groupoid.group().name(g) + ": [[";
                for (size_t i = 0; i < E.action_mats[g].rows(); ++i) {
                    if (i) out += "; ";
                    for (size_t j = 0; j < E.action_mats[g].cols(); ++j)
                        out += (j ? ", " : "") + E.action_mats[g].at(i, j).to_string();
                }
                out += "]]";
            }
            out += "\n";
        }
    }
    // assertion lines from the source, normalized in spacing
    std::istringstream is(doc.source);
    std::string raw;
    while (std::getline(is, raw)) {
        std::string line = raw;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.rfind("assert", 0) == 0) {
            auto toks = detail::tokens(line);
            std::string norm;
            for (size_t i = 0; i < toks.size(); ++i) norm += (i ? " " : "") + toks[i];
            out += norm + "\n";
        }
    }
    return out;
}

} // namespace gendiv
