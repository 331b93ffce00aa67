#pragma once

#include "gendiv/ideal.hpp"

#include <set>

namespace gendiv {

struct UnsupportedIdealClass : std::runtime_error {
    explicit UnsupportedIdealClass(const std::string& msg) : std::runtime_error(msg) {}
};

enum class Trust { Computed, Declared, Trusted };

inline const char* trust_name(Trust t) {
    switch (t) {
    case Trust::Computed: return "COMPUTED";
    case Trust::Declared: return "DECLARED";
    case Trust::Trusted: return "TRUSTED";
    }
    return "?";
}

// An ideal asserted prime, with the provenance of that assertion.
struct PrimeIdeal {
    Ideal ideal;
    Trust trust = Trust::Computed;

    PrimeIdeal() = default;
    PrimeIdeal(Ideal i, Trust t) : ideal(std::move(i)), trust(t) {
        if (!is_proper(ideal)) throw std::invalid_argument("prime ideal must be proper");
    }
};

inline bool prime_equal(const PrimeIdeal& a, const PrimeIdeal& b) {
    return ideal_equal(a.ideal, b.ideal);
}

inline std::string ideal_key(const Ideal& I) {
    std::string k;
    for (auto& g : I.groebner()) k += g.to_string() + ";";
    return k;
}

// ---- univariate irreducibility (supported classes) ------------------------

// rational roots via the rational root theorem
inline bool has_rational_root(const std::vector<Rational>& coeffs) {
    // coeffs[i] is the coefficient of x^i, exact rationals
    Integer scale = 1;
    for (auto& c : coeffs) scale = boost::multiprecision::lcm(scale, boost::multiprecision::denominator(c));
    std::vector<Integer> ic;
    for (auto& c : coeffs) ic.push_back(boost::multiprecision::numerator(Rational(c * scale)));
    while (!ic.empty() && ic.back() == 0) ic.pop_back();
    if (ic.size() <= 1) return false;
    if (ic.front() == 0) return true; // root at 0
    Integer a0 = boost::multiprecision::abs(ic.front());
    Integer an = boost::multiprecision::abs(ic.back());
    auto divisors = [](Integer n) {
        std::vector<Integer> ds;
        for (Integer d = 1; d * d <= n; ++d)
            if (n % d == 0) {
                ds.push_back(d);
                ds.push_back(n / d);
            }
        return ds;
    };
    auto eval = [&](const Rational& x) {
        Rational v = 0;
        for (size_t i = ic.size(); i-- > 0;) v = v * x + Rational(ic[i]);
        return v;
    };
    for (auto& p : divisors(a0))
        for (auto& q : divisors(an)) {
            Rational r(p, q);
            if (eval(r) == 0 || eval(-r) == 0) return true;
        }
    return false;
}

// certified irreducibility of a univariate polynomial over the coefficient
// field, within the supported class
inline bool univariate_irreducible(const Polynomial& f, size_t var) {
    int d = f.degree_in(var);
    if (d <= 0) throw std::invalid_argument("univariate_irreducible: not univariate of positive degree");
    if (d == 1) return true;
    const CoeffField& F = f.ring().field();
    if (F.is_rationals()) {
        if (d > 3)
            throw UnsupportedIdealClass("univariate irreducibility over Q supported up to degree 3");
        std::vector<Rational> coeffs(d + 1, 0);
        for (auto& [e, c] : f.terms()) coeffs[e[var]] = c;
        // degree 2 or 3: irreducible iff no rational root
        return !has_rational_root(coeffs);
    }
    // F_p: trial division by all monic polynomials of degree <= d/2
    long long p = F.characteristic();
    double count = 1;
    for (int k = 1; k <= d / 2; ++k) count *= static_cast<double>(p);
    if (count > 200000)
        throw UnsupportedIdealClass("univariate irreducibility over F_p: search space too large");
    std::vector<long long> fc(d + 1, 0);
    for (auto& [e, c] : f.terms())
        fc[e[var]] = boost::multiprecision::numerator(F.normalize(c)).convert_to<long long>();
    auto mod_rem_degree = [&](const std::vector<long long>& g) {
        // remainder degree of f mod monic g
        std::vector<long long> r = fc;
        int dg = static_cast<int>(g.size()) - 1;
        for (int i = static_cast<int>(r.size()) - 1; i >= dg; --i) {
            long long lead = r[i] % p;
            if (lead == 0) continue;
            for (int j = 0; j <= dg; ++j)
                r[i - dg + j] = ((r[i - dg + j] - lead * g[j]) % p + p * p) % p;
        }
        for (int i = std::min<int>(dg - 1, static_cast<int>(r.size()) - 1); i >= 0; --i)
            if (r[i] % p != 0) return i;
        return -1;
    };
    for (int dg = 1; dg <= d / 2; ++dg) {
        std::vector<long long> g(dg + 1, 0);
        g[dg] = 1;
        long long total = 1;
        for (int k = 0; k < dg; ++k) total *= p;
        for (long long idx = 0; idx < total; ++idx) {
            long long v = idx;
            for (int k = 0; k < dg; ++k) {
                g[k] = v % p;
                v /= p;
            }
            if (mod_rem_degree(g) < 0) return false;
        }
    }
    return true;
}

// ---- irreducibility of multivariate polynomials (supported class) ---------

inline bool supported_irreducible(const Polynomial& f);

// substitution test: specialize all but `main_var` to small integers keeping the
// main-variable degree; an irreducible specialization certifies irreducibility
// of a primitive polynomial
inline bool substitution_irreducible(const Polynomial& f, size_t main_var) {
    auto support = f.support_vars();
    std::vector<int> others;
    for (int v : support)
        if (static_cast<size_t>(v) != main_var) others.push_back(v);
    int dmain = f.degree_in(main_var);
    const std::vector<long long> values = {0, 1, -1, 2, -2, 3, -3};
    size_t k = others.size();
    size_t tuples = 1;
    for (size_t i = 0; i < k; ++i) {
        tuples *= values.size();
        if (tuples > 4000) { tuples = 4000; break; }
    }
    for (size_t t = 0; t < tuples; ++t) {
        size_t idx = t;
        std::vector<Rational> assign(k);
        for (size_t i = 0; i < k; ++i) {
            assign[i] = Rational(values[idx % values.size()]);
            idx /= values.size();
        }
        // specialize
        std::vector<Rational> coeffs; // of main var powers, as field values
        const CoeffField& F = f.ring().field();
        std::vector<Rational> acc(dmain + 1, 0);
        for (auto& [e, c] : f.terms()) {
            Rational v = c;
            for (size_t i = 0; i < k; ++i) {
                Rational base = F.normalize(assign[i]);
                for (int rep = 0; rep < e[others[i]]; ++rep) v = F.mul(v, base);
            }
            acc[e[main_var]] = F.add(acc[e[main_var]], v);
        }
        if (acc[dmain] == 0) continue; // degree dropped, useless specialization
        // build univariate in a 1-var ring and test
        PolyRing u(F, {"Z"});
        Polynomial g(u);
        for (int i = 0; i <= dmain; ++i) g.add_term({i}, acc[i]);
        bool irr;
        try {
            irr = univariate_irreducible(g, 0);
        } catch (const UnsupportedIdealClass&) {
            continue;
        }
        if (irr) return true;
    }
    throw UnsupportedIdealClass("irreducibility not certified by substitution for " + f.to_string());
}

// content of f w.r.t. variable: gcd of the coefficient polynomials of its powers
inline Polynomial content_wrt(const Polynomial& f, size_t var) {
    std::map<int, Polynomial> coeffs;
    for (auto& [e, c] : f.terms()) {
        Exps e2 = e;
        e2[var] = 0;
        auto it = coeffs.find(e[var]);
        if (it == coeffs.end()) it = coeffs.emplace(e[var], Polynomial::zero(f.ring())).first;
        it->second.add_term(e2, c);
    }
    Polynomial g = Polynomial::zero(f.ring());
    for (auto& [d, c] : coeffs) g = poly_gcd(g, c);
    return g;
}

// deterministic enumeration of small-coefficient linear polynomials in the
// given variables (first nonzero coefficient positive)
inline std::vector<Polynomial> small_linear_candidates(const PolyRing& r,
                                                       const std::vector<int>& vars) {
    std::vector<long long> pool;
    if (r.field().is_rationals()) {
        pool = {-2, -1, 0, 1, 2};
    } else {
        for (long long v = 0; v < r.field().characteristic() && v < 7; ++v) pool.push_back(v);
    }
    size_t slots = vars.size() + 1; // coefficients + constant term
    std::vector<Polynomial> out;
    size_t total = 1;
    for (size_t i = 0; i < slots; ++i) {
        total *= pool.size();
        if (total > 20000) return out; // too many variables: skip this heuristic
    }
    for (size_t idx = 0; idx < total; ++idx) {
        size_t t = idx;
        Polynomial cand(r);
        bool leading_seen = false, leading_positive = false;
        for (size_t s = 0; s < slots; ++s) {
            long long c = pool[t % pool.size()];
            t /= pool.size();
            if (c == 0) continue;
            if (!leading_seen) {
                leading_seen = true;
                leading_positive = c > 0;
            }
            if (s < vars.size())
                cand = cand + Polynomial::variable(r, vars[s]).scaled(Rational(c));
            else
                cand = cand + Polynomial::constant(r, Rational(c));
        }
        if (!leading_seen || (r.field().is_rationals() && !leading_positive)) continue;
        if (cand.is_constant()) continue;
        out.push_back(cand);
    }
    return out;
}

// irreducible factors of a squarefree polynomial in the supported class
inline std::vector<Polynomial> supported_factor_squarefree(const Polynomial& f0) {
    Polynomial f = normalize_leading(f0);
    if (f.is_constant()) return {};
    // strip variable factors
    std::vector<Polynomial> factors;
    for (size_t v = 0; v < f.ring().nvars(); ++v) {
        bool divides = true;
        for (auto& [e, c] : f.terms())
            if (e[v] == 0) { divides = false; break; }
        if (divides) {
            auto q = exact_divide(f, Polynomial::variable(f.ring(), v));
            factors.push_back(Polynomial::variable(f.ring(), v));
            f = normalize_leading(*q);
        }
    }
    // peel small-coefficient linear factors (division is the certificate)
    if (!f.is_constant() && f.support_vars().size() > 1) {
        for (auto& cand : small_linear_candidates(f.ring(), f.support_vars())) {
            if (f.is_constant()) break;
            auto q = exact_divide(f, cand);
            if (q) {
                factors.push_back(cand);
                f = normalize_leading(*q);
            }
        }
    }
    if (f.is_constant()) return factors;
    auto support = f.support_vars();
    if (support.size() == 1) {
        size_t v = static_cast<size_t>(support[0]);
        // pull out rational roots as linear factors, then certify the rest
        if (f.ring().field().is_rationals()) {
            bool progress = true;
            while (progress && f.degree_in(v) > 1) {
                progress = false;
                std::vector<Rational> coeffs(f.degree_in(v) + 1, 0);
                for (auto& [e, c] : f.terms()) coeffs[e[v]] = c;
                // try small roots p/q from the rational root theorem
                Integer scale = 1;
                for (auto& c : coeffs)
                    scale = boost::multiprecision::lcm(scale, boost::multiprecision::denominator(c));
                std::vector<Integer> ic;
                for (auto& c : coeffs) ic.push_back(boost::multiprecision::numerator(Rational(c * scale)));
                Integer a0 = boost::multiprecision::abs(ic.front());
                Integer an = boost::multiprecision::abs(ic.back());
                if (a0 == 0) {
                    factors.push_back(Polynomial::variable(f.ring(), v));
                    f = normalize_leading(*exact_divide(f, Polynomial::variable(f.ring(), v)));
                    progress = true;
                    continue;
                }
                auto divisors = [](Integer n) {
                    std::vector<Integer> ds;
                    for (Integer d = 1; d * d <= n; ++d)
                        if (n % d == 0) { ds.push_back(d); ds.push_back(n / d); }
                    return ds;
                };
                for (auto& p : divisors(a0)) {
                    for (auto& q : divisors(an)) {
                        for (int sgn : {1, -1}) {
                            Rational root(p * sgn, q);
                            Polynomial lin = Polynomial::variable(f.ring(), v) -
                                             Polynomial::constant(f.ring(), root);
                            auto quo = exact_divide(f, lin);
                            if (quo) {
                                factors.push_back(lin);
                                f = normalize_leading(*quo);
                                progress = true;
                            }
                            if (progress) break;
                        }
                        if (progress) break;
                    }
                    if (progress) break;
                }
            }
        } else {
            // F_p: peel roots by brute force
            long long p = f.ring().field().characteristic();
            bool progress = true;
            while (progress && f.degree_in(v) > 1) {
                progress = false;
                for (long long r = 0; r < p; ++r) {
                    Polynomial lin = Polynomial::variable(f.ring(), v) -
                                     Polynomial::constant(f.ring(), Rational(r));
                    auto quo = exact_divide(f, lin);
                    if (quo) {
                        factors.push_back(lin);
                        f = normalize_leading(*quo);
                        progress = true;
                        break;
                    }
                }
            }
        }
        if (f.degree_in(v) == 1) {
            factors.push_back(f);
            return factors;
        }
        if (f.is_constant()) return factors;
        if (univariate_irreducible(f, v)) {
            factors.push_back(f);
            return factors;
        }
        throw UnsupportedIdealClass("reducible univariate remainder outside supported class: " +
                                    f.to_string());
    }
    // multivariate: split off content w.r.t. the variable of highest degree
    size_t main_var = static_cast<size_t>(support[0]);
    for (int v : support)
        if (f.degree_in(v) > f.degree_in(main_var)) main_var = static_cast<size_t>(v);
    Polynomial cont = content_wrt(f, main_var);
    if (!cont.is_constant()) {
        auto prim = exact_divide(f, cont);
        if (!prim) throw std::logic_error("content does not divide polynomial");
        auto fs1 = supported_factor_squarefree(cont);
        auto fs2 = supported_factor_squarefree(*prim);
        factors.insert(factors.end(), fs1.begin(), fs1.end());
        factors.insert(factors.end(), fs2.begin(), fs2.end());
        return factors;
    }
    if (supported_irreducible(f)) {
        factors.push_back(f);
        return factors;
    }
    throw UnsupportedIdealClass("factorization outside supported class: " + f.to_string());
}

inline bool supported_irreducible(const Polynomial& f) {
    if (f.is_constant()) return false;
    auto support = f.support_vars();
    if (support.size() == 1) return univariate_irreducible(f, static_cast<size_t>(support[0]));
    // linear in a variable with constant coefficient => graph of a function
    for (int v : support) {
        if (f.degree_in(v) != 1) continue;
        Polynomial c(f.ring());
        for (auto& [e, k] : f.terms())
            if (e[v] == 1) {
                Exps e2 = e;
                e2[v] = 0;
                c.add_term(e2, k);
            }
        if (c.is_constant() && !c.is_zero()) return true;
    }
    // otherwise: univariate substitution on a primitive polynomial
    size_t main_var = static_cast<size_t>(support[0]);
    for (int v : support)
        if (f.degree_in(v) > f.degree_in(main_var)) main_var = static_cast<size_t>(v);
    if (!content_wrt(f, main_var).is_constant())
        return false; // has a content factor
    return substitution_irreducible(f, main_var);
}

// ---- minimal primes --------------------------------------------------------

// radical membership via the Rabinowitsch trick: f ∈ √I iff 1 ∈ I + (1 − z·f)
inline bool in_radical(const Polynomial& f, const Ideal& I) {
    if (f.is_zero()) return true;
    const PolyRing& P = I.ambient();
    PolyRing E = extend_ring(P, {"z@"});
    int zi = E.var_index("z@");
    std::vector<Polynomial> gens;
    for (auto& g : I.gens()) gens.push_back(transport(g, E));
    gens.push_back(Polynomial::constant(E, 1) -
                   Polynomial::variable(E, zi) * transport(f, E));
    return !is_proper(Ideal(E, gens));
}

// minimal primes of a zero-dimensional ideal whose points are all rational:
// candidate maximal ideals come from the rational roots of the univariate
// eliminants; the decomposition is certified by radical membership
inline std::optional<std::vector<Ideal>> zero_dim_rational_points(const Ideal& I) {
    const PolyRing& P = I.ambient();
    size_t n = P.nvars();
    std::vector<std::vector<Rational>> roots(n);
    for (size_t v = 0; v < n; ++v) {
        std::vector<int> elim;
        for (size_t w = 0; w < n; ++w)
            if (w != v) elim.push_back(static_cast<int>(w));
        Ideal uni = eliminate(I, elim);
        auto gb = uni.groebner();
        if (gb.size() != 1) return std::nullopt; // not zero-dimensional in this variable
        Polynomial f = squarefree_part(gb[0]);
        // collect the rational (or F_p) roots; reject irrational factors later
        if (P.field().is_rationals()) {
            bool progress = true;
            while (progress && f.degree_in(v) >= 1) {
                progress = false;
                std::vector<Rational> coeffs(f.degree_in(v) + 1, 0);
                for (auto& [e, c] : f.terms()) coeffs[e[v]] = c;
                Integer scale = 1;
                for (auto& c : coeffs)
                    scale = boost::multiprecision::lcm(scale, boost::multiprecision::denominator(c));
                std::vector<Integer> ic;
                for (auto& c : coeffs) ic.push_back(boost::multiprecision::numerator(Rational(c * scale)));
                if (ic.front() == 0) {
                    roots[v].push_back(0);
                    f = normalize_leading(*exact_divide(f, Polynomial::variable(P, v)));
                    progress = true;
                    continue;
                }
                Integer a0 = boost::multiprecision::abs(ic.front());
                Integer an = boost::multiprecision::abs(ic.back());
                auto divisors = [](Integer m) {
                    std::vector<Integer> ds;
                    for (Integer d = 1; d * d <= m; ++d)
                        if (m % d == 0) { ds.push_back(d); ds.push_back(m / d); }
                    return ds;
                };
                for (auto& pn : divisors(a0)) {
                    for (auto& qn : divisors(an)) {
                        for (int sgn : {1, -1}) {
                            Rational root(pn * sgn, qn);
                            Polynomial lin = Polynomial::variable(P, v) -
                                             Polynomial::constant(P, root);
                            auto quo = exact_divide(f, lin);
                            if (quo) {
                                roots[v].push_back(root);
                                f = normalize_leading(*quo);
                                progress = true;
                            }
                            if (progress) break;
                        }
                        if (progress) break;
                    }
                    if (progress) break;
                }
            }
            if (f.degree_in(v) >= 1) return std::nullopt; // irrational coordinates remain
        } else {
            long long p = P.field().characteristic();
            for (long long a = 0; a < p; ++a) {
                Polynomial lin = Polynomial::variable(P, v) - Polynomial::constant(P, Rational(a));
                auto quo = exact_divide(f, lin);
                if (quo) {
                    roots[v].push_back(Rational(a));
                    f = normalize_leading(*quo);
                }
            }
            if (f.degree_in(v) >= 1) return std::nullopt;
        }
    }
    // enumerate candidate points and keep those containing I
    for (size_t v = 0; v < n; ++v)
        if (roots[v].empty()) return std::nullopt;
    std::vector<Ideal> points;
    std::vector<size_t> idx(n, 0);
    while (true) {
        std::vector<Polynomial> gens;
        for (size_t v = 0; v < n; ++v)
            gens.push_back(Polynomial::variable(P, v) -
                           Polynomial::constant(P, roots[v][idx[v]]));
        Ideal cand(P, gens);
        if (ideal_contains(cand, I)) points.push_back(cand.with_basis(MonomialOrder::grevlex()));
        size_t v = 0;
        while (v < n && ++idx[v] == roots[v].size()) {
            idx[v] = 0;
            ++v;
        }
        if (v == n) break;
    }
    if (points.empty()) return std::nullopt;
    // certify: the intersection of the candidate points is the radical of I
    std::optional<Ideal> inter;
    for (auto& pt : points) inter = inter ? ideal_intersect(*inter, pt) : pt;
    for (auto& g : inter->gens())
        if (!in_radical(g, I)) return std::nullopt;
    return points;
}

inline bool is_monomial_ideal(const std::vector<Polynomial>& gb) {
    for (auto& g : gb)
        if (g.term_count() > 1) return false;
    return true;
}

namespace detail {
inline void monomial_covers(const std::vector<std::vector<int>>& supports, size_t idx,
                            std::set<int>& current, std::vector<std::set<int>>& out) {
    if (idx == supports.size()) {
        out.push_back(current);
        return;
    }
    // already covered?
    for (int v : supports[idx]) {
        if (current.count(v)) {
            monomial_covers(supports, idx + 1, current, out);
            return;
        }
    }
    for (int v : supports[idx]) {
        current.insert(v);
        monomial_covers(supports, idx + 1, current, out);
        current.erase(v);
    }
}
} // namespace detail

// minimal primes over I within the supported class; `declared` supplies
// user-asserted components for ideals outside it
inline std::vector<PrimeIdeal> minimal_primes(const Ideal& I,
                                              const std::vector<PrimeIdeal>& declared = {}) {
    const PolyRing& P = I.ambient();
    auto gb = I.groebner();
    if (!is_proper(I)) throw std::invalid_argument("minimal_primes: unit ideal");
    if (gb.empty()) return {PrimeIdeal(Ideal::zero(P), Trust::Computed)};

    if (is_monomial_ideal(gb)) {
        std::vector<std::vector<int>> supports;
        for (auto& g : gb) supports.push_back(g.support_vars());
        std::vector<std::set<int>> covers;
        std::set<int> cur;
        detail::monomial_covers(supports, 0, cur, covers);
        // keep inclusion-minimal covers
        std::vector<std::set<int>> minimal;
        for (auto& c : covers) {
            bool dominated = false;
            for (auto& d : covers)
                if (d != c && std::includes(c.begin(), c.end(), d.begin(), d.end())) {
                    dominated = true;
                    break;
                }
            if (!dominated) minimal.push_back(c);
        }
        std::sort(minimal.begin(), minimal.end());
        minimal.erase(std::unique(minimal.begin(), minimal.end()), minimal.end());
        std::vector<PrimeIdeal> out;
        for (auto& c : minimal) {
            std::vector<Polynomial> gens;
            for (int v : c) gens.push_back(Polynomial::variable(P, v));
            out.emplace_back(Ideal(P, gens).with_basis(MonomialOrder::grevlex()), Trust::Computed);
        }
        return out;
    }

    if (gb.size() == 1) {
        Polynomial f = gb[0];
        Polynomial sq = squarefree_part(f);
        auto factors = supported_factor_squarefree(sq);
        std::vector<PrimeIdeal> out;
        std::set<std::string> seen;
        for (auto& fac : factors) {
            Ideal pi = Ideal(P, {normalize_leading(fac)}).with_basis(MonomialOrder::grevlex());
            std::string key = ideal_key(pi);
            if (seen.insert(key).second) out.emplace_back(pi, Trust::Computed);
        }
        return out;
    }

    if (krull_dimension(I) == 0) {
        auto points = zero_dim_rational_points(I);
        if (points) {
            std::vector<PrimeIdeal> out;
            for (auto& pt : *points) out.emplace_back(pt, Trust::Computed);
            return out;
        }
    }

    if (!declared.empty()) {
        for (auto& p : declared)
            if (!ideal_contains(p.ideal, I))
                throw std::invalid_argument("declared component does not contain the ideal");
        return declared;
    }
    throw UnsupportedIdealClass("minimal_primes: ideal outside supported class and no declared components");
}

// verification of a user-declared prime within the supported class
inline bool verify_declared_prime(const Ideal& I) {
    if (!is_proper(I)) return false;
    auto gb = I.groebner();
    if (gb.empty()) return true; // zero ideal in a polynomial ring
    bool all_linear = true;
    for (auto& g : gb)
        if (g.degree() > 1) all_linear = false;
    if (all_linear) return true; // quotient is a polynomial ring
    if (is_monomial_ideal(gb)) {
        // monomial prime iff generated by variables, i.e. all gens degree 1
        return false; // degree > 1 monomial generator present
    }
    if (gb.size() == 1) {
        Polynomial f = gb[0];
        if (f != squarefree_part(f)) return false;
        return supported_irreducible(f);
    }
    throw UnsupportedIdealClass("prime verification outside supported class");
}

} // namespace gendiv
