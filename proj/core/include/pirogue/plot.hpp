#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

namespace pirogue {

enum class PlotKind { catch_, biomass, fleet, migrations };

PlotKind parse_plot_kind(std::string_view name);

/**
 * Renders SVG charts from a run directory written by write_outputs:
 *   catch      -> catch.svg (panel 1 per-site daily landings, panel 2 cumulative per country)
 *   biomass    -> biomass.svg (one curve per species)
 *   fleet      -> fleet.svg (units moored per site)
 *   migrations -> migrations.svg (cumulative short- and long-term migrations)
 * Returns the files written. Throws ValidationError naming a missing CSV.
 */
std::vector<std::filesystem::path> plot(const std::filesystem::path& run_dir, PlotKind kind);

}  // namespace pirogue
