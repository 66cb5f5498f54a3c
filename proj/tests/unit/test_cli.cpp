#include <doctest.h>

#include <string>

#include "commands.hpp"
#include "run_config.hpp"
#include "shellspectra/errors.hpp"

using namespace shellspectra;
using namespace shellspectra::cli;

TEST_CASE("config sections and overrides") {
    const std::string text =
        "# comment\n"
        "m = 10\n"
        "tau = -1 ; trailing comment\n"
        "[sphere-spectrum]\n"
        "m = 12,14\n"
        "[common]\n"
        "R = 2\n"
        "[weyl-count]\n"
        "kappa_max = 5\n";
    const auto a = parse_config_text(text, "sphere-spectrum");
    CHECK(a.at("m") == "12,14");
    CHECK(a.at("tau") == "-1");
    CHECK(a.at("R") == "2");
    CHECK(a.count("kappa_max") == 0);
    const auto b = parse_config_text(text, "weyl-count");
    CHECK(b.at("m") == "10");
    CHECK(b.at("kappa_max") == "5");

    CHECK_THROWS_AS(parse_config_text("bogus = 1\n", "bs-scan"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[nowhere]\n", "bs-scan"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("m 10\n", "bs-scan"), ConfigError);
    CHECK_THROWS_AS(read_config_file("/nonexistent/config.ini", "bs-scan"), ConfigError);
}

TEST_CASE("config values are validated") {
    CHECK_THROWS_AS(resolve_config("nope", {}), ConfigError);
    CHECK_THROWS_AS(resolve_config("sphere-spectrum", {{"m", "ten"}}), ConfigError);
    CHECK_THROWS_AS(resolve_config("sphere-spectrum", {{"m", "1e999"}}), ConfigError);
    CHECK_THROWS_AS(resolve_config("sphere-spectrum", {{"R", "-1"}}), ConfigError);
    CHECK_THROWS_AS(resolve_config("effective-spectrum", {{"operator", "laplace"}}), ConfigError);
    CHECK_THROWS_AS(resolve_config("modes-1d", {{"strict", "maybe"}}), ConfigError);
    const RunConfig c = resolve_config("weyl-count", {{"m", "30, 60"}, {"tau", "-1"}});
    CHECK(c.m == std::vector<double>{30.0, 60.0});
}

TEST_CASE("number formatting is fixed at 17 significant digits") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(3.0) == "3");
    CHECK(format_number(-2.5e-20) == "-2.4999999999999999e-20");
}

TEST_CASE("modes-1d output") {
    const RunConfig c = resolve_config("modes-1d", {{"m", "10,1"}, {"tau", "-1"}, {"delta", "1"}});
    const CommandOutput o = run_command(c);
    CHECK(o.csv.rfind(std::string("# ") + kFormatVersion + "\n", 0) == 0);
    CHECK(o.csv.find("# command=modes-1d\n") != std::string::npos);
    CHECK(o.csv.find("m,tau,delta,boundary,k,E1,scaled_residual\n") != std::string::npos);
    // m = 1 has mu m delta = 0.8 <= 1: no row, one warning
    CHECK(o.warnings.size() == 1);
    CHECK(o.summary["rows"].size() == 1);
    CHECK(o.summary["format_version"] == kFormatVersion);

    const RunConfig s = resolve_config("modes-1d", {{"m", "1"}, {"strict", "true"}});
    CHECK_THROWS_AS(run_command(s), NoBoundState);
}

TEST_CASE("outputs are byte identical across runs") {
    const RunConfig c = resolve_config("sphere-spectrum", {{"m", "8"}, {"tau", "-1"}});
    const CommandOutput a = run_command(c), b = run_command(c);
    CHECK(a.csv == b.csv);
    CHECK(a.summary.dump() == b.summary.dump());
    const RunConfig e = resolve_config("effective-spectrum", {{"order", "8"}, {"count", "6"}});
    CHECK(run_command(e).csv == run_command(e).csv);
}

TEST_CASE("surface errors") {
    const RunConfig c = resolve_config("effective-spectrum", {{"surface", "cube"}});
    CHECK_THROWS_AS(run_command(c), InvalidArgument);
    const RunConfig w = resolve_config("weyl-count", {{"surface", "torus:2,1"}});
    CHECK_THROWS_AS(run_command(w), ConfigError);
    const RunConfig t = resolve_config("bs-scan", {{"m", "5,6"}});
    CHECK_THROWS_AS(run_command(t), ConfigError);
}

TEST_CASE("Nystrom grid shapes") {
    CHECK(nystrom_grid("sphere", 800) == std::pair<int, int>{20, 40});
    CHECK(nystrom_grid("torus:2,1", 800) == std::pair<int, int>{40, 20});
}
