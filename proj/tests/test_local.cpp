#include "gendiv/local.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace gendiv;

namespace {

PolyRing QXY() { return PolyRing(CoeffField::rationals(), {"x", "y"}); }

Polynomial P(const PolyRing& r, const std::string& s) { return parse_poly(r, s); }

QuotientRing node() {
    PolyRing r = QXY();
    return QuotientRing(r, Ideal(r, {P(r, "x*y")}), "node");
}

QuotientRing plane() { return QuotientRing::polynomial_ring(QXY(), "plane"); }

QuotientRing curve() {
    PolyRing r(CoeffField::rationals(), {"x", "t"});
    return QuotientRing(r, Ideal(r, {P(r, "t^2 - t - x")}), "curve");
}

QuotientRing cusp() {
    PolyRing r = QXY();
    return QuotientRing(r, Ideal(r, {P(r, "y^2 - x^3")}), "cusp");
}

PrimeIdeal prime(const QuotientRing& A, const std::vector<std::string>& gens,
                    Trust t = Trust::Computed) {
    std::vector<Polynomial> ps;
    for (auto& s : gens) ps.push_back(parse_poly(A.ambient(), s));
    return ring_prime(A, ps, t);
}

} // namespace

TEST_CASE("local dimension") {
    QuotientRing A = node();
    const PolyRing& r = A.ambient();
    CHECK(local_dim(A, prime(A, {"x", "y"})) == 1);
    CHECK(local_dim(A, prime(A, {"x"})) == 0);
    CHECK(local_dim(A, prime(A, {"y"})) == 0);

    QuotientRing C = curve();
    CHECK(local_dim(C, prime(C, {"t"})) == 1);

    QuotientRing Pl = plane();
    CHECK(local_dim(Pl, prime(Pl, {"x", "y"})) == 2);
    CHECK(local_dim(Pl, prime(Pl, {"x"})) == 1);
}

TEST_CASE("local depth") {
    SECTION("regular local ring: depth equals dimension") {
        QuotientRing A = plane();
        const PolyRing& r = A.ambient();
        CHECK(local_depth(Module::free(A, 1), prime(A, {"x", "y"})) == 2);
        CHECK(local_depth(Module::free(A, 1), prime(A, {"x"})) == 1);
    }
    SECTION("node at the origin has depth one") {
        QuotientRing A = node();
        CHECK(local_depth(Module::free(A, 1), prime(A, {"x", "y"})) == 1);
    }
    SECTION("embedded component forces depth zero") {
        PolyRing r = QXY();
        QuotientRing A(r, Ideal(r, {P(r, "x^2"), P(r, "x*y")}));
        CHECK(local_depth(Module::free(A, 1), prime(A, {"x", "y"})) == 0);
    }
    SECTION("zero localization raises") {
        QuotientRing A = plane();
        const PolyRing& r = A.ambient();
        Module M = Module::quotient_by(A, {P(r, "x")});
        CHECK_THROWS_AS(local_depth(M, prime(A, {"y"})), ZeroLocalization);
    }
    SECTION("depth is bounded by dimension on the fixtures") {
        QuotientRing A = node();
        const PolyRing& r = A.ambient();
        for (auto& p : {prime(A, {"x"}), prime(A, {"y"}), prime(A, {"x", "y"})}) {
            int d = local_depth(Module::free(A, 1), p);
            CHECK(d <= local_dim(A, p));
        }
    }
}

TEST_CASE("gorenstein") {
    SECTION("the affine line is Gorenstein at the origin") {
        PolyRing r(CoeffField::rationals(), {"x"});
        QuotientRing A = QuotientRing::polynomial_ring(r);
        CHECK(is_gorenstein_at(A, prime(A, {"x"})));
    }
    SECTION("the node is Gorenstein at the origin") {
        QuotientRing A = node();
        CHECK(is_gorenstein_at(A, prime(A, {"x", "y"})));
    }
    SECTION("fat point with socle dimension two is not Gorenstein") {
        PolyRing r = QXY();
        QuotientRing A(r, Ideal(r, {P(r, "x^2"), P(r, "x*y"), P(r, "y^2")}));
        CHECK(!is_gorenstein_at(A, prime(A, {"x", "y"})));
    }
    SECTION("hypersurface fixtures are Gorenstein at every prime") {
        {
            QuotientRing A = node();
            const PolyRing& r = A.ambient();
            for (auto& p : {prime(A, {"x"}), prime(A, {"y"}), prime(A, {"x", "y"}),
                            prime(A, {"x", "y - 1"})})
                CHECK(is_gorenstein_at(A, p));
        }
        {
            QuotientRing A = cusp();
            const PolyRing& r = A.ambient();
            for (auto& p : {prime(A, {"y^2 - x^3"}), prime(A, {"x", "y"}),
                            prime(A, {"x - 1", "y - 1"})})
                CHECK(is_gorenstein_at(A, p));
        }
        {
            QuotientRing A = curve();
            const PolyRing& r = A.ambient();
            for (auto& p : {prime(A, {"t^2 - t - x"}), prime(A, {"t"}), prime(A, {"t - 1", "x"})})
                CHECK(is_gorenstein_at(A, p));
        }
    }
}

TEST_CASE("condition reports") {
    QuotientRing A = node();
    const PolyRing& r = A.ambient();
    std::vector<PrimeIdeal> ps = {prime(A, {"x"}), prime(A, {"y"}), prime(A, {"x", "y"})};

    SECTION("node satisfies G1 exhaustively") {
        ConditionReport rep = condition_report(A, std::nullopt, ConditionKind::Gr, 1, ps, true);
        CHECK(rep.verdict == Verdict::Pass);
        CHECK(rep.exhaustive);
    }
    SECTION("node satisfies S2 exhaustively") {
        ConditionReport rep = condition_report(A, std::nullopt, ConditionKind::Sr, 2, ps, true);
        CHECK(rep.verdict == Verdict::Pass);
    }
    SECTION("without the exhaustiveness flag the verdict is PARTIAL") {
        ConditionReport rep = condition_report(A, std::nullopt, ConditionKind::Sr, 2, ps, false);
        CHECK(rep.verdict == Verdict::Partial);
    }
    SECTION("missing minimal primes demote the flag") {
        ConditionReport rep = condition_report(A, std::nullopt, ConditionKind::Sr, 2,
                                               {prime(A, {"x"})}, true);
        CHECK(rep.verdict == Verdict::Partial);
        CHECK(!rep.note.empty());
    }
    SECTION("S1 fails for the line with embedded point") {
        QuotientRing B(r, Ideal(r, {P(r, "x^2"), P(r, "x*y")}));
        ConditionReport rep = condition_report(B, std::nullopt, ConditionKind::Sr, 1,
                                               {prime(B, {"x"}), prime(B, {"x", "y"})}, false);
        CHECK(rep.verdict == Verdict::Fail);
        REQUIRE(rep.witness.has_value());
        CHECK(ideal_equal(rep.checks[*rep.witness].prime.ideal,
                          Ideal(r, {P(r, "x"), P(r, "y")})));
    }
}

TEST_CASE("associated primes") {
    SECTION("reduced node curve has the two branches") {
        QuotientRing A = plane();
        const PolyRing& r = A.ambient();
        Module M = Module::quotient_by(A, {P(r, "x*y")});
        auto ass = associated_primes(M);
        REQUIRE(ass.size() == 2);
        CHECK(ideal_equal(ass[0].ideal, Ideal(r, {P(r, "x")})));
        CHECK(ideal_equal(ass[1].ideal, Ideal(r, {P(r, "y")})));
    }
    SECTION("embedded prime of (x^2, xy)") {
        QuotientRing A = plane();
        const PolyRing& r = A.ambient();
        Module M = Module::quotient_by(A, {P(r, "x^2"), P(r, "x*y")});
        auto ass = associated_primes(M);
        REQUIRE(ass.size() == 2);
        bool has_x = false, has_m = false;
        for (auto& p : ass) {
            if (ideal_equal(p.ideal, Ideal(r, {P(r, "x")}))) has_x = true;
            if (ideal_equal(p.ideal, Ideal(r, {P(r, "x"), P(r, "y")}))) has_m = true;
        }
        CHECK(has_x);
        CHECK(has_m);
    }
    SECTION("free module over the node: the minimal primes") {
        QuotientRing A = node();
        auto ass = associated_primes(Module::free(A, 1));
        REQUIRE(ass.size() == 2);
        for (auto& q : ring_minimal_primes(A)) {
            bool found = false;
            for (auto& p : ass)
                if (ideal_equal(p.ideal, q.ideal)) found = true;
            CHECK(found);
        }
    }
    SECTION("supplied candidates are tested exactly") {
        QuotientRing A = plane();
        const PolyRing& r = A.ambient();
        Module M = Module::quotient_by(A, {P(r, "x*y")});
        auto ass = associated_primes(
            M, {prime(A, {"x"}), prime(A, {"y"}), prime(A, {"x", "y"}), prime(A, {"x - 1"})});
        CHECK(ass.size() == 2);
    }
}

TEST_CASE("embedded points") {
    QuotientRing A = plane();
    const PolyRing& r = A.ambient();
    SECTION("reduced curve has none") {
        auto rep = has_embedded_points(Module::quotient_by(A, {P(r, "x*y")}));
        CHECK(!rep.has_embedded);
    }
    SECTION("(x^2, xy) has the origin embedded") {
        auto rep = has_embedded_points(Module::quotient_by(A, {P(r, "x^2"), P(r, "x*y")}));
        CHECK(rep.has_embedded);
        REQUIRE(rep.witness);
        CHECK(ideal_equal(rep.witness->ideal, Ideal(r, {P(r, "x"), P(r, "y")})));
    }
    SECTION("point module on the node is unembedded") {
        QuotientRing N = node();
        auto rep = has_embedded_points(Module::quotient_by(N, {P(r, "x"), P(r, "y")}));
        CHECK(!rep.has_embedded);
    }
    SECTION("reduced fixtures have no embedded points") {
        for (auto& R : {node(), curve(), cusp()}) {
            auto rep = has_embedded_points(Module::free(R, 1));
            CHECK(!rep.has_embedded);
        }
    }
}

TEST_CASE("total quotient decomposition") {
    SECTION("node splits into two branch fields") {
        QuotientRing A = node();
        auto dec = total_quotient_decomposition(A);
        CHECK(dec.reduced);
        REQUIRE(dec.entries.size() == 2);
        CHECK(dec.entries[0].field_descriptor);
        CHECK(ideal_equal(dec.entries[0].component.relations(),
                          Ideal(A.ambient(), {parse_poly(A.ambient(), "x")})));
        CHECK(ideal_equal(dec.entries[1].component.relations(),
                          Ideal(A.ambient(), {parse_poly(A.ambient(), "y")})));
    }
    SECTION("domain gives a single fraction-field entry") {
        QuotientRing A = curve();
        auto dec = total_quotient_decomposition(A);
        CHECK(dec.reduced);
        REQUIRE(dec.entries.size() == 1);
        CHECK(dec.entries[0].field_descriptor);
    }
    SECTION("dual numbers give a symbolic localization") {
        PolyRing r(CoeffField::rationals(), {"x", "e"});
        QuotientRing A(r, Ideal(r, {parse_poly(r, "e^2")}));
        auto dec = total_quotient_decomposition(A);
        CHECK(!dec.reduced);
        REQUIRE(dec.entries.size() == 1);
        CHECK(!dec.entries[0].field_descriptor);
        CHECK(ideal_equal(dec.entries[0].eta.ideal, Ideal(r, {parse_poly(r, "e")})));
    }
    SECTION("embedded primes of zero are rejected") {
        PolyRing r = QXY();
        QuotientRing A(r, Ideal(r, {P(r, "x^2"), P(r, "x*y")}));
        CHECK_THROWS_AS(total_quotient_decomposition(A), UnsupportedIdealClass);
    }
}
