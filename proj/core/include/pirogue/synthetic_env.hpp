#pragma once

#include <string_view>

#include "pirogue/env_grid.hpp"

namespace pirogue {

enum class SyntheticPreset {
  /// Small test world: ~30 x 24 cells, straight north-south coast.
  desk,
  /// 0.09° raster over 8.5-26.5°N, 20-13°W with a coastline passing the
  /// fifteen default landing sites.
  fullscale,
};

SyntheticPreset parse_synthetic_preset(std::string_view name);

/**
 * Builds a climatology environment: meridional SST gradient (colder north),
 * seasonal cycle (cold Dec-Jun, warm Jul-Nov) and a shelf-to-slope depth
 * profile growing with distance from the coast. SST at a given column and
 * month is strictly decreasing with latitude.
 */
EnvironmentGrid make_synthetic_environment(SyntheticPreset preset, double delta_sst = 0.0);

}  // namespace pirogue
