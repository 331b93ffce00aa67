#include "gendiv/ideal.hpp"
#include "gendiv/primes.hpp"
#include "gendiv/ring.hpp"
#include "oracle_f5.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace gendiv;

namespace {

PolyRing QXY() { return PolyRing(CoeffField::rationals(), {"x", "y"}); }
PolyRing QXT() { return PolyRing(CoeffField::rationals(), {"x", "t"}); }

Polynomial P(const PolyRing& r, const std::string& s) { return parse_poly(r, s); }

Polynomial random_poly(const PolyRing& r, std::mt19937_64& rng, int max_deg, int max_terms) {
    std::uniform_int_distribution<int> nterms(1, max_terms);
    std::uniform_int_distribution<int> deg(0, max_deg);
    long long p = r.field().characteristic();
    std::uniform_int_distribution<long long> coeff(1, p > 0 ? p - 1 : 7);
    Polynomial f(r);
    int k = nterms(rng);
    for (int t = 0; t < k; ++t) {
        Exps e(r.nvars(), 0);
        int d = deg(rng);
        std::uniform_int_distribution<size_t> var(0, r.nvars() - 1);
        for (int j = 0; j < d; ++j) e[var(rng)] += 1;
        f.add_term(e, Rational(coeff(rng)));
    }
    return f;
}

} // namespace

TEST_CASE("polynomial arithmetic and printing") {
    PolyRing r = QXT();
    Polynomial f = P(r, "t^2 - t - x");
    CHECK(f.to_string() == "t^2 - t - x");
    CHECK(P(r, "(t - 1/2)*(t + 1/2)").to_string() == "t^2 - 1/4");
    CHECK((f - f).is_zero());
    CHECK(P(r, "2*t - 1").degree() == 1);
    CHECK(P(r, "x*t^3").degree_in(1) == 3);
    CHECK_THROWS(parse_poly(r, "z + 1"));

    PolyRing f5(CoeffField::prime_field(5), {"x", "y"});
    CHECK(P(f5, "3*x + 4*x").to_string() == "2*x");
    CHECK(P(f5, "x - 6*x").is_zero());
}

TEST_CASE("groebner basis examples") {
    SECTION("single monomial generator is its own reduced basis") {
        PolyRing r = QXY();
        Ideal I(r, {P(r, "x*y")});
        auto gb = groebner_basis(I);
        REQUIRE(gb.size() == 1);
        CHECK(gb[0].to_string() == "x*y");
    }
    SECTION("lex elimination on the plane curve") {
        PolyRing r = QXT(); // lex with t > x
        Ideal I(r, {P(r, "t^2 - t - x"), P(r, "2*t - 1")});
        auto gb = I.groebner(MonomialOrder::lex());
        REQUIRE(gb.size() == 2);
        CHECK(gb[0].to_string(MonomialOrder::lex()) == "t - 1/2");
        CHECK(gb[1].to_string(MonomialOrder::lex()) == "x + 1/4");
    }
    SECTION("monomial ideal over F5") {
        PolyRing r(CoeffField::prime_field(5), {"x", "y"});
        Ideal I(r, {P(r, "x^2"), P(r, "x*y"), P(r, "y^2")});
        auto gb = groebner_basis(I);
        REQUIRE(gb.size() == 3);
        CHECK(gb[0].to_string() == "y^2");
        CHECK(gb[1].to_string() == "x*y");
        CHECK(gb[2].to_string() == "x^2");
    }
    SECTION("uniqueness under generator permutation") {
        PolyRing r = QXY();
        std::vector<Polynomial> gens = {P(r, "x^2 - y"), P(r, "x*y - 1"), P(r, "y^2 + x - 2")};
        auto gb1 = groebner_basis(Ideal(r, gens));
        std::reverse(gens.begin(), gens.end());
        auto gb2 = groebner_basis(Ideal(r, gens));
        REQUIRE(gb1.size() == gb2.size());
        for (size_t i = 0; i < gb1.size(); ++i) CHECK(gb1[i] == gb2[i]);
    }
}

TEST_CASE("normal form") {
    PolyRing r = QXY();
    auto gb = groebner_basis(Ideal(r, {P(r, "x*y")}));
    CHECK(normal_form(P(r, "x^2*y"), gb).is_zero());
    CHECK(normal_form(P(r, "1"), gb).to_string() == "1");

    PolyRing rt = QXT();
    auto gbc = groebner_basis(Ideal(rt, {P(rt, "t^2 - t - x")}));
    CHECK(normal_form(P(rt, "t^2"), gbc).to_string() == "t + x");

    SECTION("idempotence on fuzz corpus") {
        std::mt19937_64 rng(42);
        for (int i = 0; i < 40; ++i) {
            Polynomial f = random_poly(rt, rng, 5, 4);
            Polynomial n1 = normal_form(f, gbc);
            CHECK(normal_form(n1, gbc) == n1);
        }
    }
}

TEST_CASE("ideal quotient") {
    PolyRing r = QXY();
    SECTION("monomial quotient") {
        Ideal q = ideal_quotient(Ideal(r, {P(r, "x*y")}), Ideal(r, {P(r, "x")}));
        auto gb = q.groebner();
        REQUIRE(gb.size() == 1);
        CHECK(gb[0].to_string() == "y");
    }
    SECTION("annihilator of x in the node") {
        // ((xy) : (x)) lifted to the ambient ring
        Ideal q = ideal_quotient(Ideal(r, {P(r, "x*y")}), Ideal(r, {P(r, "x")}));
        CHECK(is_member(P(r, "y"), q));
        CHECK(!is_member(P(r, "x"), q));
    }
    SECTION("nonzerodivisor has trivial annihilator in the node") {
        Ideal q = ideal_quotient(Ideal(r, {P(r, "x*y")}), Ideal(r, {P(r, "x + y")}));
        // (xy) : (x+y) = (xy), which reduces to (0) in the node
        CHECK(ideal_equal(q, Ideal(r, {P(r, "x*y")})));
    }
    SECTION("(I : J)·J ⊆ I on fuzzed pairs") {
        std::mt19937_64 rng(7);
        for (int i = 0; i < 12; ++i) {
            Ideal I(r, {random_poly(r, rng, 3, 2), random_poly(r, rng, 3, 2)});
            Ideal J(r, {random_poly(r, rng, 2, 2)});
            Ideal q = ideal_quotient(I, J);
            Ideal prod = ideal_product(q, J);
            for (auto& f : prod.gens()) CHECK(is_member(f, I));
        }
    }
}

TEST_CASE("eliminate") {
    PolyRing r = QXT(); // vars x=0, t=1
    SECTION("dominant projection has no relation") {
        Ideal I(r, {P(r, "t^2 - t - x")});
        Ideal e = eliminate(I, {1});
        CHECK(e.is_zero_ideal());
    }
    SECTION("point fiber") {
        Ideal I(r, {P(r, "t^2 - t - x"), P(r, "2*t - 1")});
        Ideal e = eliminate(I, {1});
        auto gb = e.groebner();
        REQUIRE(gb.size() == 1);
        CHECK(gb[0].to_string() == "x + 1/4");
    }
    SECTION("eliminate y from (xy)") {
        PolyRing rxy = QXY();
        Ideal e = eliminate(Ideal(rxy, {P(rxy, "x*y")}), {1});
        CHECK(e.is_zero_ideal());
    }
    SECTION("elimination output is contained in the ideal") {
        std::mt19937_64 rng(11);
        PolyRing rxy = QXY();
        for (int i = 0; i < 10; ++i) {
            Ideal I(rxy, {random_poly(rxy, rng, 3, 3), random_poly(rxy, rng, 3, 3)});
            if (!is_proper(I)) continue;
            Ideal e = eliminate(I, {0});
            for (auto& g : e.gens()) CHECK(is_member(g, I));
        }
    }
}

TEST_CASE("membership") {
    PolyRing r = QXY();
    CHECK(is_member(P(r, "x^2*y"), Ideal(r, {P(r, "x*y")})));

    PolyRing rt = QXT();
    // x ∈ (t, t^2 - t - x)
    CHECK(is_member(P(rt, "x"), Ideal(rt, {P(rt, "t"), P(rt, "t^2 - t - x")})));
    // the maximal ideal at (x = -1/4, t = 1/2) is proper
    CHECK(!is_member(P(rt, "1"), Ideal(rt, {P(rt, "t^2 - t - x"), P(rt, "2*t - 1")})));
}

TEST_CASE("krull dimension") {
    PolyRing r = QXY();
    CHECK(krull_dimension(Ideal(r, {P(r, "x*y")})) == 1);
    PolyRing rt = QXT();
    CHECK(krull_dimension(Ideal(rt, {P(rt, "t^2 - t - x")})) == 1);
    PolyRing rx(CoeffField::rationals(), {"x"});
    CHECK(krull_dimension(Ideal::zero(rx)) == 1);
    CHECK(krull_dimension(Ideal(r, {P(r, "x"), P(r, "y")})) == 0);
    CHECK_THROWS(krull_dimension(Ideal(r, {P(r, "1")})));
}

TEST_CASE("units in quotient rings") {
    PolyRing rt = QXT();
    QuotientRing A(rt, Ideal(rt, {P(rt, "t^2 - t - x")}));
    CHECK(!A.is_unit(P(rt, "t - 1")));  // (0,1) lies on the curve
    CHECK(!A.is_unit(P(rt, "2*t - 1"))); // (-1/4,1/2) lies on the curve
    CHECK(A.is_unit(P(rt, "3")));
    CHECK_THROWS(QuotientRing(rt, Ideal(rt, {P(rt, "1")}))); // zero ring rejected
}

TEST_CASE("nonzerodivisors") {
    PolyRing r = QXY();
    QuotientRing node(r, Ideal(r, {P(r, "x*y")}));
    CHECK(!is_nonzerodivisor(P(r, "x"), node));
    auto w = zerodivisor_witness(P(r, "x"), node);
    REQUIRE(w.has_value());
    CHECK(w->to_string() == "y");
    CHECK(is_nonzerodivisor(P(r, "x + y"), node));

    PolyRing rt = QXT();
    QuotientRing curve(rt, Ideal(rt, {P(rt, "t^2 - t - x")}));
    CHECK(is_nonzerodivisor(P(rt, "t"), curve));

    SECTION("product closure on fuzzed node elements") {
        std::mt19937_64 rng(3);
        int found = 0;
        for (int i = 0; i < 60 && found < 8; ++i) {
            Polynomial a = node.reduce(random_poly(r, rng, 2, 3));
            Polynomial b = node.reduce(random_poly(r, rng, 2, 3));
            if (is_nonzerodivisor(a, node) && is_nonzerodivisor(b, node)) {
                CHECK(is_nonzerodivisor(node.reduce(a * b), node));
                ++found;
            }
        }
        CHECK(found > 0);
    }
}

TEST_CASE("gcd and squarefree part") {
    PolyRing r = QXY();
    CHECK(poly_gcd(P(r, "x^2*y"), P(r, "x*y^2")).to_string() == "x*y");
    CHECK(poly_gcd(P(r, "x + y"), P(r, "x*y")).is_constant());
    CHECK(squarefree_part(P(r, "x^2*y")).to_string() == "x*y");
    CHECK(squarefree_part(P(r, "(x + y)^2*(x - y)")).to_string() == "y^2 - x^2");
}

TEST_CASE("minimal primes") {
    PolyRing r = QXY();
    SECTION("monomial splitting") {
        auto ps = minimal_primes(Ideal(r, {P(r, "x*y")}));
        REQUIRE(ps.size() == 2);
        CHECK(ideal_equal(ps[0].ideal, Ideal(r, {P(r, "x")})));
        CHECK(ideal_equal(ps[1].ideal, Ideal(r, {P(r, "y")})));
        CHECK(ps[0].trust == Trust::Computed);
    }
    SECTION("radical of (x^2, xy)") {
        auto ps = minimal_primes(Ideal(r, {P(r, "x^2"), P(r, "x*y")}));
        REQUIRE(ps.size() == 1);
        CHECK(ideal_equal(ps[0].ideal, Ideal(r, {P(r, "x")})));
    }
    SECTION("irreducible curve") {
        PolyRing rt = QXT();
        auto ps = minimal_primes(Ideal(rt, {P(rt, "t^2 - t - x")}));
        REQUIRE(ps.size() == 1);
        CHECK(ideal_equal(ps[0].ideal, Ideal(rt, {P(rt, "t^2 - t - x")})));
    }
    SECTION("cusp is irreducible") {
        auto ps = minimal_primes(Ideal(r, {P(r, "y^2 - x^3")}));
        REQUIRE(ps.size() == 1);
    }
    SECTION("split principal generator") {
        auto ps = minimal_primes(Ideal(r, {P(r, "x^2*y - y^3")})); // y(x-y)(x+y)
        REQUIRE(ps.size() == 3);
    }
    SECTION("unsupported class raises") {
        Ideal I(r, {P(r, "x^2 + y^2 - 1"), P(r, "x*y - 1")});
        CHECK_THROWS_AS(minimal_primes(I), UnsupportedIdealClass);
    }
    SECTION("declared components pass through") {
        Ideal I(r, {P(r, "x^2 + y^2 - 1"), P(r, "x*y - 1")});
        PrimeIdeal p(Ideal(r, {P(r, "x^2 + y^2 - 1"), P(r, "x*y - 1")}), Trust::Declared);
        auto ps = minimal_primes(I, {p});
        REQUIRE(ps.size() == 1);
        CHECK(ps[0].trust == Trust::Declared);
    }
}

TEST_CASE("declared prime verification") {
    PolyRing r = QXY();
    CHECK(verify_declared_prime(Ideal(r, {P(r, "x"), P(r, "y")})));
    CHECK(verify_declared_prime(Ideal(r, {P(r, "y^2 - x^3")})));
    CHECK(!verify_declared_prime(Ideal(r, {P(r, "x^2")})));
    PolyRing rt = QXT();
    CHECK(verify_declared_prime(Ideal(rt, {P(rt, "t^2 - t - x")})));
}

TEST_CASE("membership agrees with the truncated linear-algebra oracle") {
    PolyRing r(CoeffField::prime_field(5), {"x", "y", "z"});
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<Polynomial> gens;
        std::uniform_int_distribution<int> ngens(1, 4);
        int k = ngens(rng);
        for (int i = 0; i < k; ++i) gens.push_back(random_poly(r, rng, 3, 4));
        Ideal I(r, gens);
        oracle::TruncatedSpan span(r, gens, 9);
        auto gb = I.groebner();
        for (int probe = 0; probe < 10; ++probe) {
            Polynomial f = random_poly(r, rng, 6, 5);
            bool gb_says = normal_form(f, gb).is_zero();
            bool oracle_says = span.contains(f);
            CHECK(gb_says == oracle_says);
        }
    }
}
