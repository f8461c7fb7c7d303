#pragma once

#include <filesystem>
#include <functional>
#include <string>

#include "pirogue/config.hpp"
#include "pirogue/engine.hpp"
#include "pirogue/env_grid.hpp"

namespace pirogue::testing {

/// Repository data directory (configured at build time).
std::filesystem::path data_dir();

/// Fresh empty directory under the build tree.
std::filesystem::path scratch_dir(const std::string& name);

/// Grid from per-cell functions; depth NaN marks land. SST takes month 1..12.
EnvironmentGrid make_grid(GridGeometry geometry, const std::function<double(int row, int col)>& depth,
                          const std::function<double(int month, int row, int col)>& sst, double delta_sst = 0.0);

/// All-sea grid with one depth and one SST everywhere, every month.
EnvironmentGrid flat_grid(int nrows, int ncols, double depth, double sst, double origin_lat = 14.0,
                          double origin_lon = -18.0);

/// Parsed desk config with its output directory cleared.
RunConfig desk_config();

/// Config for the full-scale synthetic world at representation factor 10.
RunConfig fullscale_config(double q_scale, int years, std::uint64_t seed, double delta_sst = 0.0);

std::string read_file(const std::filesystem::path& path);

}  // namespace pirogue::testing
