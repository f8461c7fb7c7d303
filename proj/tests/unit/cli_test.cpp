#include <cstdlib>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"
#include "worlds.hpp"

#include "pirogue/env_grid.hpp"

#ifdef PIROGUE_TEST_CLI

using namespace pirogue;

namespace {

int cli(const std::string& args) {
  const std::string cmd = std::string("\"") + PIROGUE_TEST_CLI + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const std::filesystem::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("run, plot and exit codes") {
    const auto dir = testing::scratch_dir("cli_run");
    const auto cfg = testing::data_dir() / "configs" / "desk.cfg";
    REQUIRE(cli("run --quiet --config " + q(cfg) + " --out " + q(dir / "out")) == 0);
    CHECK(std::filesystem::exists(dir / "out" / "landings_daily.csv"));
    CHECK(std::filesystem::exists(dir / "out" / "run_meta.json"));
    CHECK(cli("plot --dir " + q(dir / "out")) == 0);
    CHECK(std::filesystem::exists(dir / "out" / "catch.svg"));
    CHECK(std::filesystem::exists(dir / "out" / "migrations.svg"));

    std::ofstream(dir / "bad.cfg") << "env_dir = " << (testing::data_dir() / "desk" / "env").string()
                                   << "\nfleet = " << (testing::data_dir() / "desk" / "fleet.csv").string()
                                   << "\nreproduction_per_year = 5\n";
    CHECK(cli("run --config " + q(dir / "bad.cfg")) == 1);
    CHECK(cli("run --config " + q(dir / "missing.cfg")) == 1);
    CHECK(cli("plot --dir " + q(dir / "nothing")) == 1);
    CHECK(cli("frobnicate") == 1);
  }

  TEST_CASE("gen-env writes a loadable environment") {
    const auto dir = testing::scratch_dir("cli_env");
    REQUIRE(cli("gen-env --preset desk --out " + q(dir)) == 0);
    const auto grid = load_environment(dir, 0.0);
    CHECK(grid.layer_count() == 12);
    CHECK(cli("gen-env --preset moon --out " + q(dir / "x")) == 1);
  }

  TEST_CASE("saltelli and oft") {
    const auto dir = testing::scratch_dir("cli_sa");
    const auto cfg = testing::data_dir() / "configs" / "desk.cfg";
    CHECK(cli("saltelli --config " + q(cfg) + " --n 4 --horizon 1 --out " + q(dir / "sa")) == 0);
    CHECK(std::filesystem::exists(dir / "sa" / "sobol_report.csv"));
    CHECK(std::filesystem::exists(dir / "sa" / "raw_samples.csv"));
    CHECK(cli("saltelli --config " + q(cfg) + " --n 6 --out " + q(dir / "sb")) == 1);
    CHECK(cli("oft --config " + q(cfg) + " --axis delta_sst --values 0,1.5 --out " + q(dir / "oft.csv")) == 0);
    CHECK(std::filesystem::exists(dir / "oft.csv"));
    CHECK(cli("oft --config " + q(cfg) + " --axis warp --values 1 --out " + q(dir / "oft2.csv")) == 1);
  }
}

#endif
