#include "gendiv/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gendiv - generalized divisor verification on affine charts and quotient stacks"};
    app.require_subcommand(1);

    std::string check_file;
    bool json_out = false;
    int bound = -1;
    bool trust_primes = false;
    int jobs = 1;
    auto* check = app.add_subcommand("check", "run the assertions of a document");
    check->add_option("file", check_file, "input document")->required();
    check->add_flag("--json", json_out, "emit the report as JSON");
    check->add_option("--bound", bound, "default degree bound for bounded searches");
    check->add_flag("--trust-primes", trust_primes, "accept primes declared 'trusted'");
    check->add_option("--jobs", jobs, "run assertions concurrently");

    std::string recheck_file;
    auto* recheck = app.add_subcommand("recheck", "re-validate the certificates of a JSON report");
    recheck->add_option("report", recheck_file, "report produced by check --json")->required();

    std::string fmt_file;
    auto* fmt = app.add_subcommand("fmt", "canonical reprint of a document");
    fmt->add_option("file", fmt_file, "input document")->required();

    CLI11_PARSE(app, argc, argv);

    if (check->parsed()) {
        gendiv::Report rep;
        try {
            gendiv::Document doc = gendiv::parse_document(read_file(check_file));
            gendiv::RunOptions opts;
            opts.bound = bound;
            opts.trust_primes = trust_primes;
            opts.jobs = jobs;
            rep = gendiv::Runner(doc, opts).run();
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 3;
        }
        std::cout << (json_out ? gendiv::emit_json(rep) : gendiv::emit_text(rep));
        return rep.exit_code();
    }
    if (recheck->parsed()) {
        gendiv::RecheckResult res;
        try {
            gendiv::Json stored = gendiv::Json::parse(read_file(recheck_file));
            res = gendiv::recheck_report(stored);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 3;
        }
        std::cout << (res.ok ? "RECHECK PASS " : "RECHECK FAIL ") << res.message << "\n";
        return res.ok ? 0 : 1;
    }
    if (fmt->parsed()) {
        try {
            gendiv::Document doc = gendiv::parse_document(read_file(fmt_file));
            std::cout << gendiv::format_document(doc);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 3;
        }
        return 0;
    }
    return 3;
}
