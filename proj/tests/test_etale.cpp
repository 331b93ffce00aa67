#include "gendiv/etale.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace gendiv;

namespace {

Polynomial P(const PolyRing& r, const std::string& s) { return parse_poly(r, s); }

QuotientRing line() {
    PolyRing r(CoeffField::rationals(), {"x"});
    return QuotientRing::polynomial_ring(r, "B");
}

QuotientRing curve() {
    PolyRing r(CoeffField::rationals(), {"x", "t"});
    return QuotientRing(r, Ideal(r, {P(r, "t^2 - t - x")}), "A");
}

QuotientRing node() {
    PolyRing r(CoeffField::rationals(), {"x", "y"});
    return QuotientRing(r, Ideal(r, {P(r, "x*y")}), "node");
}

RingMap curve_map(const QuotientRing& B, const QuotientRing& A) {
    return RingMap(B, A, {P(A.ambient(), "x")});
}

PrimeIdeal prime(const QuotientRing& A, const std::vector<std::string>& gens) {
    std::vector<Polynomial> ps;
    for (auto& s : gens) ps.push_back(parse_poly(A.ambient(), s));
    return ring_prime(A, ps, Trust::Computed);
}

EtaleCertificate curve_cert(const RingMap& f, const std::vector<PrimeIdeal>& primes) {
    const PolyRing& ra = f.target().ambient();
    return certify_etale(f, {"t"}, {P(ra, "t^2 - t - x")}, primes, P(ra, "2*t - 1"));
}

} // namespace

TEST_CASE("etale certificates") {
    QuotientRing B = line();
    QuotientRing A = curve();
    RingMap f = curve_map(B, A);
    const PolyRing& ra = A.ambient();

    SECTION("curve map is certified at (t)") {
        EtaleCertificate cert = curve_cert(f, {prime(A, {"t"})});
        CHECK(cert.scope == EtaleScope::AtPrimes);
        REQUIRE(cert.primes.size() == 1);
        CHECK(A.elements_equal(cert.jacobian, P(ra, "2*t - 1")));
        CHECK(!normal_form(cert.jacobian, cert.primes[0].ideal.groebner()).is_zero());
    }
    SECTION("identity map is globally etale") {
        EtaleCertificate cert = certify_etale(RingMap::identity(A), {}, {});
        CHECK(cert.scope == EtaleScope::Global);
        CHECK(A.elements_equal(cert.jacobian, P(ra, "1")));
    }
    SECTION("prime on the jacobian locus is rejected") {
        PrimeIdeal bad = prime(A, {"2*t - 1", "x + 1/4"});
        CHECK_THROWS_AS(curve_cert(f, {bad}), NotEtaleAt);
    }
    SECTION("wrong presentation is rejected") {
        CHECK_THROWS_AS(certify_etale(f, {"t"}, {P(ra, "t^2 - x")}), BadPresentation);
        CHECK_THROWS_AS(certify_etale(f, {"t"}, {P(ra, "t^2 - t - x"), P(ra, "t")}),
                        BadPresentation);
        CHECK_THROWS_AS(certify_etale(f, {"t"}, {P(ra, "t^2 - t - x")}, {}, P(ra, "t")),
                        BadPresentation);
    }
}

TEST_CASE("prime contraction") {
    QuotientRing B = line();
    QuotientRing A = curve();
    RingMap f = curve_map(B, A);
    const PolyRing& rb = B.ambient();

    SECTION("(t) contracts to (x)") {
        PrimeIdeal p = contract_prime(f, prime(A, {"t"}));
        CHECK(ideal_equal(p.ideal, Ideal(rb, {P(rb, "x")})));
        CHECK(p.trust == Trust::Computed);
    }
    SECTION("zero ideal contracts to zero for the injective curve map") {
        PrimeIdeal p = contract_prime(f, prime(A, {}));
        CHECK(p.ideal.groebner().empty());
    }
    SECTION("the other point of the fiber also contracts to (x)") {
        PrimeIdeal p = contract_prime(f, prime(A, {"t - 1", "x"}));
        CHECK(ideal_equal(p.ideal, Ideal(rb, {P(rb, "x")})));
    }
    SECTION("contraction along the identity is the identity") {
        QuotientRing N = node();
        PrimeIdeal q = prime(N, {"x", "y"});
        PrimeIdeal p = contract_prime(RingMap::identity(N), q);
        CHECK(ideal_equal(p.ideal, q.ideal));
    }
}

TEST_CASE("local formula verification") {
    QuotientRing B = line();
    QuotientRing A = curve();
    RingMap f = curve_map(B, A);

    SECTION("curve map at (t): dimensions and depths match") {
        EtaleCertificate cert = curve_cert(f, {prime(A, {"t"})});
        LocalFormulaReport rep = verify_local_formulas(cert, prime(A, {"t"}));
        CHECK(rep.dim_target == 1);
        CHECK(rep.dim_source == 1);
        CHECK(rep.depth_target == 1);
        CHECK(rep.depth_source == 1);
        CHECK(rep.pass);
    }
    SECTION("identity on the node at the origin") {
        QuotientRing N = node();
        EtaleCertificate cert = certify_etale(RingMap::identity(N), {}, {});
        LocalFormulaReport rep = verify_local_formulas(cert, prime(N, {"x", "y"}));
        CHECK(rep.dim_target == 1);
        CHECK(rep.depth_target == 1);
        CHECK(rep.pass);
    }
    SECTION("five matched maximal primes off the jacobian locus") {
        for (auto c : {"2", "3", "-1", "-2", "4"}) {
            std::string tgen = std::string("t - (") + c + ")";
            PrimeIdeal q = prime(A, {tgen});
            EtaleCertificate cert = curve_cert(f, {q});
            LocalFormulaReport rep = verify_local_formulas(cert, q);
            CHECK(rep.pass);
            CHECK(rep.dim_target == 1);
            CHECK(rep.depth_target == 1);
        }
    }
}

TEST_CASE("nonzerodivisor transport") {
    QuotientRing B = line();
    QuotientRing A = curve();
    const PolyRing& rb = B.ambient();

    SECTION("along the etale curve map") {
        RingMap f = curve_map(B, A);
        NzdTransportReport rep = nzd_transport(f, P(rb, "x"));
        CHECK(rep.pass);
        CHECK(A.elements_equal(rep.image, P(A.ambient(), "t^2 - t")));
    }
    SECTION("along the node identity") {
        QuotientRing N = node();
        NzdTransportReport rep = nzd_transport(RingMap::identity(N), P(N.ambient(), "x + y"));
        CHECK(rep.pass);
    }
    SECTION("non-flat fixture is flagged, not silently passed") {
        QuotientRing N = node();
        RingMap g(B, N, {P(N.ambient(), "x")});
        NzdTransportReport rep = nzd_transport(g, P(rb, "x"));
        CHECK(!rep.pass);
        CHECK(rep.nonflat_witness);
        REQUIRE(rep.annihilator_witness);
        CHECK(N.elements_equal(*rep.annihilator_witness, P(N.ambient(), "y")));
    }
    SECTION("source zerodivisors are rejected") {
        QuotientRing N = node();
        CHECK_THROWS_AS(nzd_transport(RingMap::identity(N), P(N.ambient(), "x")),
                        SourceZerodivisor);
    }
}

TEST_CASE("literal image membership") {
    QuotientRing B = line();
    QuotientRing A = curve();
    RingMap f = curve_map(B, A);
    const PolyRing& ra = A.ambient();
    const PolyRing& rb = B.ambient();

    SECTION("t is not a literal image at bound 6") {
        ImageMembershipReport rep = literal_image_membership(P(ra, "t"), f, 6);
        CHECK(!rep.in_image);
        CHECK(rep.records.size() == 7);
        for (auto& rec : rep.records) CHECK(rec.rank_augmented == rec.rank + 1);
    }
    SECTION("t^2 - t is the image of x") {
        ImageMembershipReport rep = literal_image_membership(P(ra, "t^2 - t"), f, 4);
        REQUIRE(rep.in_image);
        CHECK(B.elements_equal(*rep.witness, P(rb, "x")));
    }
    SECTION("(t^2 - t)^3 is the image of x^3") {
        ImageMembershipReport rep = literal_image_membership(P(ra, "(t^2 - t)^3"), f, 6);
        REQUIRE(rep.in_image);
        CHECK(B.elements_equal(*rep.witness, P(rb, "x^3")));
    }
    SECTION("membership is monotone in the bound") {
        for (int d = 1; d <= 5; ++d) {
            ImageMembershipReport rep = literal_image_membership(P(ra, "t^2 - t"), f, d);
            CHECK(rep.in_image == (d >= 1));
        }
    }
}

TEST_CASE("quotient saturation comparison") {
    QuotientRing B = line();
    QuotientRing A = curve();
    RingMap f = curve_map(B, A);
    const PolyRing& ra = A.ambient();

    SECTION("curve map at (t): every bounded candidate acquires an inverse") {
        SaturationReport rep = compare_quotient_saturation(f, prime(A, {"t"}), 4);
        CHECK(rep.verdict == SaturationVerdict::Equal);
        bool found = false;
        auto qgb = prime(A, {"t"}).ideal.groebner();
        for (auto& w : rep.witnesses) {
            // every witness satisfies a·c = f(b)·s with s a unit at q and b a source nzd
            CHECK(A.elements_equal(A.reduce(w.a * w.c), A.reduce(f.apply(w.b) * w.s)));
            CHECK(!normal_form(w.s, qgb).is_zero());
            CHECK(is_nonzerodivisor(w.b, B));
            if (!A.elements_equal(w.a, P(ra, "t"))) continue;
            found = true;
            // the paper's witness: f(x) = t·(t-1) with t-1 a unit at (t)
            CHECK(B.elements_equal(w.b, P(B.ambient(), "x")));
            CHECK(A.elements_equal(w.c, P(ra, "t - 1")));
            CHECK(A.elements_equal(w.s, P(ra, "1")));
            CHECK(!normal_form(w.c, qgb).is_zero());
        }
        CHECK(found);
    }
    SECTION("identity map compares equal") {
        QuotientRing N = node();
        SaturationReport rep =
            compare_quotient_saturation(RingMap::identity(N), prime(N, {"x", "y"}), 3);
        CHECK(rep.verdict == SaturationVerdict::Equal);
    }
    SECTION("non-flat fixture is DISTINCT with an image obstruction") {
        QuotientRing N = node();
        RingMap g(B, N, {P(N.ambient(), "x")});
        SaturationReport rep = compare_quotient_saturation(g, prime(N, {"x", "y"}), 3);
        CHECK(rep.verdict == SaturationVerdict::Distinct);
        REQUIRE(rep.nonflat_source);
        REQUIRE(rep.nonflat_annihilator);
    }
}

TEST_CASE("pullback checks") {
    QuotientRing B = line();
    QuotientRing A = curve();
    RingMap f = curve_map(B, A);
    const PolyRing& rb = B.ambient();
    QuotientRing N = node();
    const PolyRing& rn = N.ambient();

    SECTION("free modules pull back reflexively") {
        EtaleCertificate cert = curve_cert(f, {prime(A, {"t"})});
        ReflexivePullbackReport rep = reflexive_pullback_check(cert, Module::free(B, 2));
        CHECK(rep.pass);
    }
    SECTION("principal ideal (x) pulls back reflexively along the curve map") {
        EtaleCertificate cert = curve_cert(f, {prime(A, {"t"})});
        ReflexivePullbackReport rep =
            reflexive_pullback_check(cert, Module::from_ideal(B, {P(rb, "x")}));
        CHECK(rep.pass);
    }
    SECTION("maximal ideal of the node pulls back along the identity") {
        EtaleCertificate cert = certify_etale(RingMap::identity(N), {}, {});
        Module m = Module::from_ideal(N, {P(rn, "x"), P(rn, "y")});
        ReflexivePullbackReport rep = reflexive_pullback_check(cert, m);
        CHECK(rep.pass);
    }
    SECTION("non-reflexive source is rejected") {
        EtaleCertificate cert = curve_cert(f, {prime(A, {"t"})});
        Module torsion = Module::quotient_by(B, {P(rb, "x")});
        CHECK_THROWS_AS(reflexive_pullback_check(cert, torsion), SourceNotReflexive);
    }
    SECTION("hom pullback is an isomorphism for free, ideal and torsion modules") {
        for (auto& M : {Module::free(B, 1), Module::free(B, 2),
                        Module::from_ideal(B, {P(rb, "x")}),
                        Module::quotient_by(B, {P(rb, "x")})}) {
            HomPullbackReport rep = hom_pullback_check(f, M);
            CHECK(rep.verdict.iso);
        }
    }
    SECTION("hom pullback along the node identity") {
        Module m = Module::from_ideal(N, {P(rn, "x"), P(rn, "y")});
        HomPullbackReport rep = hom_pullback_check(RingMap::identity(N), m);
        CHECK(rep.verdict.iso);
    }
}
