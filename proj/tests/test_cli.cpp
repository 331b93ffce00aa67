#include "gendiv/runner.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace gendiv;

namespace {

Report run_text(const std::string& text, RunOptions opts = {}) {
    Document doc = parse_document(text);
    return Runner(doc, opts).run();
}

} // namespace

TEST_CASE("document parsing") {
    SECTION("ring declarations") {
        Document doc = parse_document("ring A = Q[x,y] / (x*y)\n");
        REQUIRE(doc.rings.count("A"));
        CHECK(doc.rings.at("A").relation_basis().size() == 1);
        CHECK(doc.rings.at("A").relation_basis()[0].to_string() == "x*y");
    }
    SECTION("prime-field rings") {
        Document doc = parse_document("field F = Fp 5\nring A = F[x]\nring B = Fp7[y]\n");
        CHECK(doc.rings.at("A").field().characteristic() == 5);
        CHECK(doc.rings.at("B").field().characteristic() == 7);
    }
    SECTION("module via presentation matrix") {
        Document doc = parse_document(
            "ring A = Q[x,y] / (x*y)\nmodule M over A = coker [[y]] gens 1\n");
        const Module& M = doc.modules.at("M").second;
        CHECK(M.gens() == 1);
        CHECK(M.rel().cols() == 1);
        CHECK(M.rel().at(0, 0).to_string() == "y");
    }
    SECTION("the zero ring is rejected") {
        CHECK_THROWS_AS(parse_document("ring A = Q[x] / (1)\n"), ParseError);
    }
    SECTION("duplicate names are rejected") {
        CHECK_THROWS_AS(parse_document("ring A = Q[x]\nring A = Q[y]\n"), ParseError);
    }
    SECTION("unresolved references are rejected") {
        CHECK_THROWS_AS(parse_document("ideal I in A = (x)\n"), ParseError);
        CHECK_THROWS_AS(parse_document("ring A = Q[x]\nassert reflexive M\n"), ParseError);
    }
    SECTION("syntax errors carry line numbers") {
        try {
            parse_document("ring A = Q[x]\nring B Q[y]\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line_no == 2);
        }
    }
    SECTION("non-prime declarations are rejected") {
        CHECK_THROWS_AS(parse_document("ring A = Q[x,y]\nprime p in A = (x^2)\n"), ParseError);
    }
    SECTION("unsupported primality needs the trusted keyword") {
        std::string text = "ring A = Q[x,y]\nprime p in A = (x^2 + y^2 - 1, x*y - 1)\n";
        CHECK_THROWS_AS(parse_document(text), ParseError);
        std::string trusted =
            "ring A = Q[x,y]\nprime p in A = (x^2 + y^2 - 1, x*y - 1) trusted\n";
        Document doc = parse_document(trusted);
        CHECK(doc.has_trusted_primes);
        CHECK(doc.primes.at("p").second.trust == Trust::Trusted);
    }
}

TEST_CASE("runner verdicts and exit codes") {
    SECTION("all-pass document exits zero") {
        Report rep = run_text("ring A = Q[x,y] / (x*y)\n"
                              "assert dim A = 1\n"
                              "assert nzd (x + y) in A\n");
        CHECK(rep.exit_code() == 0);
        CHECK(rep.count(CheckVerdict::Pass) == 2);
    }
    SECTION("a failing check exits one") {
        Report rep = run_text("ring A = Q[x,y] / (x*y)\nassert dim A = 2\n");
        CHECK(rep.exit_code() == 1);
    }
    SECTION("the cocycle-failure fixture emits FAIL with the composite") {
        Report rep = run_text(
            "ring L = Q[u]\n"
            "group Z2 = table{e, s; s, e}\n"
            "action flip of Z2 on L : s: u -> -u\n"
            "module M over L = ideal (u)\n"
            "equivariant E2 = M with flip : s: [[2]]\n"
            "assert cocycle E2\n");
        CHECK(rep.exit_code() == 1);
        REQUIRE(rep.entries.size() == 1);
        CHECK(rep.entries[0].verdict == CheckVerdict::Fail);
        CHECK(rep.entries[0].detail.find("composite=4") != std::string::npos);
        std::string text = emit_text(rep);
        CHECK(text.find("CHECK cocycle FAIL") != std::string::npos);
    }
    SECTION("an exhausted saturation bound exits two") {
        // a saturation candidate with no bounded witness: expect equal but get
        // unknown at a tiny bound
        Report rep = run_text(
            "ring B = Q[x]\n"
            "ring A = Q[x, t] / (t^2 - t - x)\n"
            "prime qT in A = (t)\n"
            "map f : B -> A on x -> x\n"
            "assert saturation f at qT bound 0 expect equal\n");
        CHECK(rep.exit_code() == 2);
        CHECK(rep.entries[0].verdict == CheckVerdict::Unknown);
    }
    SECTION("trusted primes require the flag") {
        Document doc = parse_document(
            "ring A = Q[x,y]\nprime p in A = (x^2 + y^2 - 1, x*y - 1) trusted\n");
        CHECK_THROWS(Runner(doc, RunOptions{}).run());
        RunOptions opts;
        opts.trust_primes = true;
        CHECK_NOTHROW(Runner(doc, opts).run());
    }
    SECTION("negated assertions flip typed failures into passes") {
        Report rep = run_text("ring P = Q[x,y]\n"
                              "module m over P = ideal (x, y)\n"
                              "assert not reflexive m\n"
                              "assert not divisor m\n");
        CHECK(rep.exit_code() == 0);
    }
    SECTION("errors are reported per entry") {
        Report rep = run_text("ring A = Q[x,y] / (x*y)\n"
                              "module M over A = coker [[x]] gens 1\n"
                              "prime pY in A = (y)\n"
                              "assert depth M at pY = 0\n");
        // M localizes to zero at (y): ZeroLocalization becomes an ERROR entry
        CHECK(rep.entries[0].verdict == CheckVerdict::Error);
        CHECK(rep.exit_code() == 1);
    }
}

TEST_CASE("emission is deterministic") {
    std::string text = "ring A = Q[x,y] / (x*y)\n"
                       "module m over A = ideal (x, y)\n"
                       "prime pX in A = (x)\n"
                       "prime pY in A = (y)\n"
                       "assert reflexive m\n"
                       "assert minimalprimes A = pX pY\n";
    Report r1 = run_text(text);
    Report r2 = run_text(text);
    CHECK(emit_text(r1) == emit_text(r2));
    CHECK(emit_json(r1) == emit_json(r2));
    SECTION("concurrent execution preserves order and bytes") {
        RunOptions par;
        par.jobs = 4;
        Report r3 = run_text(text, par);
        CHECK(emit_json(r3) == emit_json(r1));
    }
}

TEST_CASE("recheck validates reports") {
    std::string text = "ring A = Q[x,y] / (x*y)\n"
                       "ideal I in A = (x*y, x^2)\n"
                       "assert member (x^2*y) in I\n"
                       "assert dim A = 1\n";
    Report rep = run_text(text);
    Json stored = report_json(rep);
    SECTION("a faithful report rechecks") {
        RecheckResult res = recheck_report(stored);
        CHECK(res.ok);
    }
    SECTION("a tampered verdict is caught") {
        Json bad = stored;
        bad["entries"][1]["verdict"] = "FAIL";
        RecheckResult res = recheck_report(bad);
        CHECK(!res.ok);
    }
    SECTION("a tampered certificate is caught") {
        Json bad = stored;
        bad["entries"][0]["certificate"]["cofactors"][0] = "x + 1";
        RecheckResult res = recheck_report(bad);
        CHECK(!res.ok);
    }
}

TEST_CASE("cocycle certificates survive serialization round trips") {
    std::string text = "ring L = Q[u]\n"
                       "group Z2 = table{e, s; s, e}\n"
                       "action flip of Z2 on L : s: u -> -u\n"
                       "module M over L = ideal (u)\n"
                       "equivariant Em = M with flip : s: [[-1]]\n"
                       "assert cocycle Em\n"
                       "assert stackdivisor Em\n";
    Document doc = parse_document(text);
    Report r1 = Runner(doc, RunOptions{}).run();
    CHECK(r1.exit_code() == 0);
    // reprint, reparse, re-verify: the certificates hold on the round trip
    std::string printed = format_document(doc);
    Document doc2 = parse_document(printed);
    CHECK_NOTHROW(check_cocycle(doc2.equivariants.at("Em")));
    Report r2 = Runner(doc2, RunOptions{}).run();
    CHECK(r2.exit_code() == 0);
    CHECK(emit_text(r1) == emit_text(r2));
}

TEST_CASE("canonical reprint") {
    std::string text = "  ring   A =  Q[x,y] /  (y*x)\n"
                       "module m over A = ideal (x,y)\n"
                       "assert    reflexive   m\n";
    Document doc = parse_document(text);
    std::string once = format_document(doc);
    Document doc2 = parse_document(once);
    std::string twice = format_document(doc2);
    CHECK(once == twice);
    CHECK(once.find("ring A = Q[x, y] / (x*y)") != std::string::npos);
    CHECK(once.find("assert reflexive m") != std::string::npos);
}
