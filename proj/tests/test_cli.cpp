// End-to-end checks of the command-line tool: golden outputs, exit codes
// (0 success, 1 assertion/acceptance failure, 2 usage/parse error) and
// byte-identical replay.  The binary path arrives as the first program
// argument; the working directory is the repository root.

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "bracketlab/parse.hpp"

namespace {

std::string g_binary;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cmd(const std::string& args) {
    RunResult res;
    std::string cmd = g_binary + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed");
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, got);
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string write_temp(const std::string& name, const std::string& body) {
    std::string path = "build/" + name;
    std::ofstream out(path);
    if (!out.good()) throw std::runtime_error("cannot write " + path);
    out << body;
    return path;
}

}  // namespace

TEST_CASE("eval matches the library and honors modes") {
    auto bind = write_temp("cli_bind_float.txt", "a1 = sqrt2\n");
    auto res = run_cmd("eval --phi '{a1*n}' --bind " + bind + " --n 5");
    REQUIRE(res.exit_code == 0);

    auto poly = bracketlab::realize(bracketlab::parse_form("{a1*n}"),
                                    bracketlab::Binding<double>{{1, std::numbers::sqrt2}});
    std::istringstream lines(res.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "n,phi,frac");
    for (long long n = 1; n <= 5; ++n) {
        REQUIRE(std::getline(lines, line));
        auto c1 = line.find(','), c2 = line.rfind(',');
        double phi = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        CHECK(phi == doctest::Approx(bracketlab::eval(poly, n)).epsilon(1e-15));
    }

    // exact mode prints rationals: phi(6) = 9/5, {phi(6)} = -1/5
    auto exact = run_cmd("eval --phi '3/10*n' --n 6 --mode exact");
    REQUIRE(exact.exit_code == 0);
    CHECK(exact.out.find("6,9/5,-1/5") != std::string::npos);
}

TEST_CASE("malformed input exits with the usage code") {
    CHECK(run_cmd("eval --phi '{' --n 3").exit_code == 2);
    CHECK(run_cmd("eval --phi '{a1*n}' --n 3").exit_code == 2);  // unbound symbol
    auto bind = write_temp("cli_bind_pi.txt", "a1 = pi\n");
    CHECK(run_cmd("eval --phi '{a1*n}' --bind " + bind + " --n 3 --mode exact").exit_code == 2);
    CHECK(run_cmd("gowers --phi 'n' --n 16 --k 9").exit_code == 2);
    CHECK(run_cmd("frobnicate").exit_code == 2);
    CHECK(run_cmd("repro --experiment no-such-thing").exit_code == 2);
}

TEST_CASE("gowers subcommand emits a full report") {
    auto res = run_cmd("gowers --n 24 --k 2");
    REQUIRE(res.exit_code == 0);
    auto j = nlohmann::json::parse(res.out);
    CHECK(j.at("schema") == 1);
    CHECK(j.at("k") == 2);
    CHECK(j.at("N") == 24);
    CHECK(j.at("Ntilde").get<long long>() >= 4 * 24);
    CHECK(std::abs(j.at("norm").get<double>() - 1.0) <= 1e-9);  // 1_[N]
    CHECK(j.at("normalizer").get<double>() > 0.0);
    CHECK(j.at("method") == "recursive-fft");
    CHECK(j.at("config").at("subcommand") == "gowers");

    // quadratic phase at k = 3
    auto bind = write_temp("cli_bind_quad.txt", "a1 = 3/7\na2 = 2/5\na3 = 1/3\n");
    auto res3 = run_cmd("gowers --phi 'a1*n^2 + a2*n + a3' --bind " + bind + " --n 32 --k 3");
    REQUIRE(res3.exit_code == 0);
    auto j3 = nlohmann::json::parse(res3.out);
    CHECK(std::abs(j3.at("norm").get<double>() - 1.0) <= 1e-9);

    // k = 5 routes to monte carlo and reports a standard error
    auto res5 = run_cmd("gowers --phi 'a1*n^2' --bind " + bind + " --n 8 --k 5 --budget 2000");
    REQUIRE(res5.exit_code == 0);
    auto j5 = nlohmann::json::parse(res5.out);
    CHECK(j5.at("method") == "monte-carlo");
    CHECK(j5.contains("mc_stderr"));
    CHECK(j5.contains("seed"));
}

TEST_CASE("reports replay byte-identically from the same configuration") {
    auto bind = write_temp("cli_bind_replay.txt", "a1 = sqrt3\n");
    std::string cmd = "gowers --phi 'a1*n^2' --bind " + bind + " --n 16 --k 4 --seed 42";
    auto a = run_cmd(cmd);
    auto b = run_cmd(cmd);
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("recurrence densities come out as CSV with a header") {
    auto res = run_cmd("recur --nu '1/4*n' --delta 3/10 --n 100,200 --format csv --mode exact");
    REQUIRE(res.exit_code == 0);
    std::istringstream lines(res.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "N,density");
    std::getline(lines, line);
    CHECK(line.substr(0, 4) == "100,");
    CHECK(std::stod(line.substr(4)) == doctest::Approx(0.75));
    std::getline(lines, line);
    CHECK(std::stod(line.substr(4)) == doctest::Approx(0.75));
}

TEST_CASE("the orbit dump verifies its closed form") {
    auto res = run_cmd("nil --alpha 1/2 --beta 1/3 --n 60 --mode exact");
    REQUIRE(res.exit_code == 0);
    std::istringstream lines(res.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "n,chi1,chi2,chi3");
    int rows = 0;
    while (std::getline(lines, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 60);
}

TEST_CASE("failed floors exit with the acceptance code") {
    // a floors file that demands more than any norm can deliver
    nlohmann::json floors{
        {"schema", 1},
        {"seed", 0},
        {"uk_floor",
         {{"floor", {{"3", {{"64", 2.0}, {"128", 2.0}, {"256", 2.0}}}}},
          {"pilot", {{"3", {{"64", 2.0}, {"128", 2.0}, {"256", 2.0}}}}}}},
        {"recurrence_scan", {{"control_floor", 0.15}}},
    };
    auto path = write_temp("cli_floors_impossible.json", floors.dump());
    auto res = run_cmd("repro --experiment uk-floor --k 3 --floors " + path);
    CHECK(res.exit_code == 1);
    auto j = nlohmann::json::parse(res.out);
    CHECK(j.at("pass") == false);
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <path-to-bracketlab-binary>\n");
        return 1;
    }
    g_binary = argv[1];
    doctest::Context ctx;
    return ctx.run();
}
