#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "stripent/cli.hpp"
#include "stripent/selftest.hpp"

using namespace stripent;

namespace {

int run(std::vector<std::string> args) {
    std::vector<const char*> argv = {"stripent"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
    std::ifstream is(path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("selftest passes on a fresh build") {
    auto results = selftest();
    for (const auto& r : results) {
        CAPTURE(r.name);
        CAPTURE(r.detail);
        REQUIRE(r.pass);
    }
}

TEST_CASE("injected fault fails naming the invariant") {
    auto results = selftest(Fault::WrongTransferEntry);
    bool failed_named = false;
    for (const auto& r : results)
        if (!r.pass && r.name == "transfer_small_matrices") failed_named = true;
    CHECK(failed_named);
}

TEST_CASE("entropy subcommand writes table and manifest") {
    std::string out = "test_cli_entropy.csv";
    REQUIRE(run({"entropy", "--spec", "hardsquare", "--n-max", "4", "--tol", "1e-10", "--out",
                 out}) == 0);
    std::string csv = slurp(out);
    CHECK(csv.rfind("n,h_n,", 0) == 0);
    CHECK(slurp(out + ".manifest.json").find("\"subcommand\": \"entropy\"") != std::string::npos);
    std::remove(out.c_str());
    std::remove((out + ".manifest.json").c_str());
}

TEST_CASE("identical config and seed give byte-identical data") {
    std::string a = "test_cli_perc_a.csv", b = "test_cli_perc_b.csv";
    REQUIRE(run({"perc", "--p", "0.5", "--n-list", "1,2", "--trials", "2000", "--seed", "7",
                 "--out", a}) == 0);
    REQUIRE(run({"perc", "--p", "0.5", "--n-list", "1,2", "--trials", "2000", "--seed", "7",
                 "--out", b}) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(!slurp(a).empty());
    for (const std::string& f : {a, b}) {
        std::remove(f.c_str());
        std::remove((f + ".manifest.json").c_str());
    }
}

TEST_CASE("contract errors exit with code 2") {
    CHECK(run({"entropy", "--spec", "no_such_file.sft", "--n-max", "4"}) == 2);
}

TEST_CASE("json format produces a schema_version") {
    std::string out = "test_cli_entropy.json";
    REQUIRE(run({"entropy", "--spec", "fullshift:2", "--n-max", "4", "--format", "json", "--out",
                 out}) == 0);
    CHECK(slurp(out).find("schema_version") != std::string::npos);
    std::remove(out.c_str());
    std::remove((out + ".manifest.json").c_str());
}
