#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pirogue/config.hpp"

namespace pirogue {

template <typename T>
struct NamedLevel {
  std::string name;
  T value;
};

/**
 * Full-factorial scenario design over climate, infrastructure, fleet and
 * catchability, each combination repeated `replicates` times with seeds
 * base_seed + replicate.
 *
 * File form (`key = value`):
 *   base = path/to/base.cfg
 *   climate = ref:0, warm:1.5, hot:3
 *   infrastructure = cap2020:sites.csv, homog:sites_homogeneous.csv
 *   fleet = f2014:fleet_2014.csv
 *   catchability = low:1e-6/1e-5/1e-4, high:1e-4/1e-3/1e-2
 *   replicates = 2
 *   base_seed = 100
 *   out_dir = runs
 */
struct ScenarioMatrix {
  RunConfig base;
  std::vector<NamedLevel<double>> climate;
  std::vector<NamedLevel<std::filesystem::path>> infrastructure;
  std::vector<NamedLevel<std::filesystem::path>> fleet;
  std::vector<NamedLevel<std::array<double, 3>>> catchability;
  int replicates = 1;
  std::uint64_t base_seed = 1;
  std::filesystem::path out_dir;
};

ScenarioMatrix parse_scenario_matrix(const std::filesystem::path& path);

struct MatrixRow {
  std::string run_id;
  std::string climate;
  std::string infrastructure;
  std::string fleet;
  std::string catchability;
  int replicate = 0;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::vector<std::string> countries;
  std::vector<double> final_year_catch;  // per country, last simulated year (or partial)
  bool collapsed = false;                // total biomass < 5% of initial at some frame
  double years_to_collapse = -1.0;
  bool ok = true;
  std::string error;
};

/// Expands the matrix into run configs in row order (climate outermost, replicate innermost).
std::vector<std::pair<MatrixRow, RunConfig>> expand_matrix(const ScenarioMatrix& matrix);

/// Runs every combination; failures are recorded per row and do not stop the matrix.
/// Writes per-run directories and `summary.csv` under out_dir when it is set.
std::vector<MatrixRow> run_matrix(const ScenarioMatrix& matrix, int threads = 1);

}  // namespace pirogue
