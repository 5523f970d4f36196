#include <sstream>
#include <string>

#include "doctest.h"
#include "smc/cli/commands.hpp"
#include "smc/cli/config.hpp"
#include "smc/error.hpp"

using namespace smc::cli;

namespace {

Config from_toml(const std::string& text)
{
    std::istringstream in(text);
    return Config::parse_toml(in);
}

std::pair<int, std::string> run(const std::string& command, const Config& cfg)
{
    std::ostringstream out, log;
    const int code = run_command(command, cfg, out, log);
    return {code, out.str()};
}

std::size_t count_lines(const std::string& text, const std::string& prefix)
{
    std::istringstream in(text);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) n += line.rfind(prefix, 0) == 0;
    return n;
}

}  // namespace

TEST_CASE("TOML config parsing and overrides")
{
    auto cfg = from_toml("seed = 7\nreplicates = 3\n[algorithm]\nkind = \"ppg\"\nk = [4, 8]\n");
    CHECK(cfg.get_u64("seed", 0) == 7);
    CHECK(cfg.get_string("algorithm.kind", "") == "ppg");
    CHECK(cfg.get_sizes("algorithm.k", {}) == std::vector<std::size_t>{4, 8});
    cfg.set(std::string_view("seed=9"));
    CHECK(cfg.get_u64("seed", 0) == 9);
    CHECK_THROWS_AS(cfg.set(std::string_view("novalue")), smc::Error);
    CHECK_THROWS_AS(cfg.get_double("algorithm.kind", 0.0), smc::Error);
    CHECK_THROWS_AS(from_toml("[broken\nx = 1\n"), smc::Error);
    CHECK_THROWS_AS(from_toml("x = \"abc\n"), smc::Error);
    CHECK_THROWS_AS(from_toml("x = [1, 2\n"), smc::Error);
    CHECK_THROWS_AS(from_toml("replicates 3\n"), smc::Error);
    const auto multi = from_toml("# comment\n[grid]\nk0 = [\n  0,\n  2, # two\n]\nname = \"a#b\"\n");
    CHECK(multi.get_sizes("grid.k0", {}) == std::vector<std::size_t>{0, 2});
    CHECK(multi.get_string("grid.name", "") == "a#b");

    // The hash covers resolved values, including defaults.
    Config a, b;
    a.get_size("replicates", 5);
    b.set("replicates", "5");
    b.get_size("replicates", 5);
    CHECK(a.hash() == b.hash());
    CHECK(split_list("[1, 'a', 3]") == std::vector<std::string>{"1", "a", "3"});
}

TEST_CASE("configuration errors exit with code 2")
{
    Config unknown;
    unknown.set("no_such_key", "1");
    CHECK(run("smooth", unknown).first == kExitConfig);

    Config bad;
    bad.set("algorithm.kind", "magic");
    CHECK(run("smooth", bad).first == kExitConfig);

    Config budget;
    budget.set("algorithm.kind", "ppg");
    budget.set("algorithm.C", "100");
    budget.set("algorithm.k", "[3]");
    CHECK(run("smooth", budget).first == kExitConfig);
}

TEST_CASE("smooth is deterministic and writes one row per replicate")
{
    Config cfg;
    cfg.set("model.T", "20");
    cfg.set("algorithm.N", "32");
    cfg.set("replicates", "1");
    const auto [code, out] = run("smooth", cfg);
    REQUIRE(code == kExitOk);
    CHECK(out.rfind("# smc smooth config_hash=", 0) == 0);
    CHECK(count_lines(out, "replicate,") == 1);
    CHECK(run("smooth", cfg).second == out);

    Config ppg = cfg;
    ppg.set("algorithm.kind", "ppg");
    ppg.set("algorithm.k", "[4]");
    ppg.set("algorithm.k0", "[2]");
    ppg.set("functional", "zero");
    const auto [zcode, zout] = run("smooth", ppg);
    REQUIRE(zcode == kExitOk);
    std::istringstream in(zout);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind("replicate,", 0) == 0) CHECK(line.find(",0,0,0,,0,,") != std::string::npos);
}

TEST_CASE("diag prints one row per (rho, N)")
{
    Config cfg;
    cfg.set("diag.N", "[4, 100]");
    cfg.set("diag.rho", "[1, 2]");
    const auto [code, out] = run("diag", cfg);
    REQUIRE(code == kExitOk);
    CHECK(count_lines(out, "1,1,") + count_lines(out, "2,1,") == 4);
    CHECK(out.find("1,1,4,4,4,") != std::string::npos);
}

TEST_CASE("simulate writes the requested number of observations")
{
    Config cfg;
    cfg.set("model.T", "7");
    const auto [code, out] = run("simulate", cfg);
    REQUIRE(code == kExitOk);
    std::size_t data = 0;
    std::istringstream in(out);
    for (std::string line; std::getline(in, line);) data += !line.empty() && line[0] != '#';
    CHECK(data == 8);  // header plus seven rows
}
