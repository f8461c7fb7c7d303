#include "pirogue/species.hpp"

#include <cmath>
#include <fstream>

#include "csv.hpp"
#include "pirogue/errors.hpp"
#include "pirogue/outputs.hpp"
#include "pirogue/population.hpp"

namespace pirogue {

std::string_view to_string(Stratum s) { return s == Stratum::pelagic ? "pelagic" : "demersal"; }

Stratum parse_stratum(std::string_view text) {
  if (text == "pelagic") return Stratum::pelagic;
  if (text == "demersal") return Stratum::demersal;
  throw ValidationError("unknown stratum '" + std::string(text) + "' (pelagic, demersal)");
}

void validate_species(const SpeciesParams& sp, double cell_area_km2) {
  const std::string who = "species '" + sp.name + "': ";
  if (sp.name.empty()) throw ValidationError("species name must not be empty");
  if (!(sp.t_min < sp.t_max)) throw ValidationError(who + "t_min must be below t_max");
  if (!(sp.depth_min >= 0.0 && sp.depth_min < sp.depth_max)) throw ValidationError(who + "need 0 <= depth_min < depth_max");
  if (!(sp.carrying_capacity > 0.0) || !std::isfinite(sp.carrying_capacity)) throw ValidationError(who + "K must be positive");
  if (!(sp.density > 0.0) || !std::isfinite(sp.density)) throw ValidationError(who + "k must be positive");
  if (!(sp.growth_rate > 0.0) || !std::isfinite(sp.growth_rate)) throw ValidationError(who + "r must be positive");
  if (!(sp.initial_biomass > 0.0 && sp.initial_biomass <= sp.carrying_capacity))
    throw ValidationError(who + "B0 must lie in (0, K]");
  if (sp.patch_capacity(cell_area_km2) < kPatchDeletionThreshold)
    throw ValidationError(who + "patch capacity k * cell area is below the " +
                          format_number(kPatchDeletionThreshold) + " t deletion threshold");
}

std::vector<SpeciesParams> default_species() {
  // Initial biomass is 0.3 K for every species (see README, calibration).
  return {
      {0, "guinean_demersal", Stratum::demersal, 24.0, 29.0, 0.0, 100.0, 300'000.0, 30.0, 0.5, 90'000.0},
      {1, "saharan_demersal", Stratum::demersal, 18.0, 25.0, 0.0, 100.0, 500'000.0, 50.0, 0.5, 150'000.0},
      {2, "guinean_pelagic", Stratum::pelagic, 24.0, 29.0, 0.0, 100.0, 1'000'000.0, 100.0, 1.5, 300'000.0},
      {3, "saharan_pelagic", Stratum::pelagic, 18.0, 25.0, 0.0, 300.0, 3'000'000.0, 100.0, 1.5, 900'000.0},
  };
}

namespace {
const std::vector<std::string> kHeader = {"name",  "stratum", "t_min", "t_max", "depth_min",
                                          "depth_max", "K_tons", "k_tons_per_km2", "r_per_year", "B0_tons"};
}

std::vector<SpeciesParams> load_species(const std::filesystem::path& path) {
  const auto t = csv::read(path);
  csv::expect_header(t, kHeader);
  std::vector<SpeciesParams> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    SpeciesParams sp;
    sp.id = static_cast<SpeciesId>(i);
    sp.name = t.rows[i][0];
    try {
      sp.stratum = parse_stratum(t.rows[i][1]);
    } catch (const ValidationError& e) {
      t.fail(i, e.what());
    }
    sp.t_min = t.number(i, 2);
    sp.t_max = t.number(i, 3);
    sp.depth_min = t.number(i, 4);
    sp.depth_max = t.number(i, 5);
    sp.carrying_capacity = t.number(i, 6);
    sp.density = t.number(i, 7);
    sp.growth_rate = t.number(i, 8);
    sp.initial_biomass = t.number(i, 9);
    for (const auto& prev : out)
      if (prev.name == sp.name) t.fail(i, "duplicate species '" + sp.name + "'");
    out.push_back(std::move(sp));
  }
  if (out.empty()) throw ValidationError(path.string() + ": no species");
  return out;
}

void write_species(const std::filesystem::path& path, const std::vector<SpeciesParams>& species) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  for (std::size_t i = 0; i < kHeader.size(); ++i) out << (i ? "," : "") << kHeader[i];
  out << '\n';
  for (const auto& sp : species) {
    out << sp.name << ',' << to_string(sp.stratum) << ',' << format_number(sp.t_min) << ',' << format_number(sp.t_max)
        << ',' << format_number(sp.depth_min) << ',' << format_number(sp.depth_max) << ','
        << format_number(sp.carrying_capacity) << ',' << format_number(sp.density) << ','
        << format_number(sp.growth_rate) << ',' << format_number(sp.initial_biomass) << '\n';
  }
}

}  // namespace pirogue
