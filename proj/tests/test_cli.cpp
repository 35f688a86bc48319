#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <permshape/cli.hpp>

#include "oracles.hpp"

using namespace permshape;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "permshape");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("matrix command", "[cli]") {
    SECTION("132 at n = 3 has row sums 5") {
        const auto r = run({"matrix", "--pattern", "132", "--n", "3", "--mode", "exact"});
        REQUIRE(r.code == 0);
        std::istringstream is(r.out);
        const auto rows = csv::read(is);
        REQUIRE(rows.size() == 9);
        std::vector<BigCount> sums(4, 0);
        for (const auto& row : rows) sums[row.j] += csv::parse_count(row.values.at(0));
        for (unsigned j = 1; j <= 3; ++j) CHECK(sums[j] == 5);
    }
    SECTION("exact CSV round trip equals brute force at n = 6") {
        const auto r = run({"matrix", "--pattern", "123", "--n", "6"});
        REQUIRE(r.code == 0);
        std::istringstream is(r.out);
        const auto bp = oracle::cells(oracle::avoiders(6, {1, 2, 3}), 6);
        const auto rows = csv::read(is);
        REQUIRE(rows.size() == 36);
        for (const auto& row : rows) REQUIRE(csv::parse_count(row.values.at(0)) == bp[row.j][row.k]);
    }
    SECTION("normalized block") {
        const auto r = run({"matrix", "--pattern", "132", "--n", "40", "--mode", "normalized", "--rows", "5:6",
                            "--cols", "10:12"});
        REQUIRE(r.code == 0);
        std::istringstream is(r.out);
        const auto rows = csv::read(is);
        REQUIRE(rows.size() == 6);
        CHECK(rows.front().j == 5);
        CHECK(rows.front().k == 10);
        const double v = std::stod(rows.front().values.at(0));
        CHECK(v == Catch::Approx(normalize(exact_Q(40, 5, 10), 40).ratio).epsilon(1e-10));
    }
    SECTION("writes to --out") {
        const auto path = (std::filesystem::temp_directory_path() / "permshape_cli_test.csv").string();
        const auto r = run({"matrix", "--pattern", "123", "--n", "4", "--out", path});
        REQUIRE(r.code == 0);
        CHECK(r.out.empty());
        std::ifstream f(path);
        CHECK(csv::read(f).size() == 16);
        std::remove(path.c_str());
    }
}

TEST_CASE("diag command", "[cli]") {
    SECTION("argmax of the 123 diagonal at n = 250 is 118") {
        const auto r = run({"diag", "--pattern", "123", "--n", "250"});
        REQUIRE(r.code == 0);
        std::istringstream is(r.out);
        const auto rows = csv::read(is);
        REQUIRE(rows.size() == 250);
        unsigned best = 0;
        double top = -1;
        for (const auto& row : rows) {
            CHECK(row.j == row.k);
            const double v = std::stod(row.values.at(0));
            if (v > top) {
                top = v;
                best = row.j;
            }
        }
        CHECK(best == 118);
    }
    SECTION("peaks") {
        const auto r = run({"diag", "--pattern", "both", "--n", "250", "--peak"});
        REQUIRE(r.code == 0);
        CHECK(r.out == "pattern 123 n 250 argmax 118 interior_peak 118\npattern 132 n 250 argmax 250 interior_peak 119\n");
    }
    SECTION("both patterns side by side, anti-diagonal") {
        const auto r = run({"diag", "--pattern", "both", "--n", "5", "--anti", "--mode", "exact"});
        REQUIRE(r.code == 0);
        CHECK(r.out.rfind("j,k,P,Q\n1,5,", 0) == 0);
        std::istringstream is(r.out);
        BigCount s = 0;
        for (const auto& row : csv::read(is)) s += csv::parse_count(row.values.at(0));
        CHECK(s == 42);
    }
}

TEST_CASE("sample command", "[cli]") {
    const auto a = run({"sample", "--pattern", "231", "--n", "30", "--count", "20", "--seed", "5"});
    const auto b = run({"sample", "--pattern", "231", "--n", "30", "--count", "20", "--seed", "5"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    std::istringstream is(a.out);
    const auto perms = read_permutations(is);
    REQUIRE(perms.size() == 20);
    for (const auto& p : perms) {
        CHECK(p.size() == 30);
        CHECK(avoids(p, PatternClass::p231));
    }
}

TEST_CASE("stats command", "[cli]") {
    SECTION("exact") {
        const auto r = run({"stats", "--stat", "first", "--pattern", "123", "--n", "3", "--exact"});
        REQUIRE(r.code == 0);
        CHECK(r.out == "first 123 3 exact 11/5  \n");
        const auto f = run({"stats", "--stat", "fp", "--pattern", "321", "--n", "50", "--exact"});
        CHECK(f.out == "fp 321 50 exact 1  \n");
    }
    SECTION("Monte Carlo") {
        const auto r = run({"stats", "--stat", "fp", "--pattern", "132", "--n", "50", "--mc", "--samples", "2000",
                            "--seed", "3"});
        REQUIRE(r.code == 0);
        CHECK(r.out.rfind("fp 132 50 mc:2000 ", 0) == 0);
    }
    SECTION("exact needs enumeration for lis") {
        CHECK(run({"stats", "--stat", "lis", "--pattern", "321", "--n", "8", "--exact"}).code == 0);
        CHECK(run({"stats", "--stat", "lis", "--pattern", "321", "--n", "40", "--exact"}).code == 2);
    }
    SECTION("method flags") {
        CHECK(run({"stats", "--stat", "fp", "--pattern", "123", "--n", "5"}).code == 2);
        CHECK(run({"stats", "--stat", "fp", "--pattern", "123", "--n", "5", "--exact", "--mc"}).code == 2);
    }
}

TEST_CASE("limit command", "[cli]") {
    const auto r = run({"limit", "--theorem", "G", "--a", "1", "--b", "1", "--c", "0", "--alpha", "0"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("exponent 0") != std::string::npos);
    CHECK(r.out.find("u = 0.25") != std::string::npos);
    const auto bad = run({"limit", "--theorem", "G", "--a", "1", "--b", "1", "--c", "-1", "--alpha", "0.5"});
    CHECK(bad.code == 2);
}

TEST_CASE("verify command", "[cli]") {
    const auto r = run({"verify", "--suite", "oracle", "--max-n", "6"});
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(run({"verify", "--suite", "nope"}).code == 2);
}

TEST_CASE("errors and exit codes", "[cli]") {
    CHECK(run({}).code == 2);
    CHECK(run({"matrix", "--n", "3"}).code == 2);
    CHECK(run({"matrix", "--pattern", "321", "--n", "3"}).code == 2);
    CHECK(run({"matrix", "--pattern", "123", "--n", "3", "--rows", "2:9"}).code == 2);
    CHECK(run({"matrix", "--pattern", "123", "--n", "3", "--rows", "x"}).code == 2);
    CHECK(run({"matrix", "--pattern", "123", "--n", "3", "--mode", "fast"}).code == 2);
    CHECK(run({"sample", "--pattern", "123", "--n", "0", "--count", "1", "--seed", "1"}).code == 2);
    const auto e = run({"stats", "--stat", "bogus", "--pattern", "123", "--n", "3", "--exact"});
    CHECK(e.code == 2);
    CHECK(e.err.find("bogus") != std::string::npos);
    CHECK(run({"--help"}).code == 0);
}
