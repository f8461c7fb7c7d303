#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "pirogue/engine.hpp"

namespace pirogue {

/// Landed tons per simulated year (365 frames each; the last year may be partial).
/// Restricted to one country when given.
std::vector<double> annual_landings(const RunOutputs& out, std::optional<std::string_view> country = {});

/// Sum of all species' biomass at every frame.
std::vector<double> total_biomass_series(const RunOutputs& out);

/// First frame index at which total biomass drops below `fraction` of the initial, if any.
std::optional<std::int64_t> collapse_frame(const RunOutputs& out, double fraction = 0.05);

/// Mean of annual landings over years [first, last] (1-based, inclusive), clipped to available years.
double mean_annual_landings(const RunOutputs& out, int first_year, int last_year,
                            std::optional<std::string_view> country = {});

}  // namespace pirogue
