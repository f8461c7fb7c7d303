#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pirogue/env_grid.hpp"

namespace pirogue {

using SpeciesId = int;

enum class Stratum { pelagic, demersal };

std::string_view to_string(Stratum s);
Stratum parse_stratum(std::string_view text);

/// A model-species: an aggregate of real species sharing a stratum and a thermal affinity.
struct SpeciesParams {
  SpeciesId id = 0;
  std::string name;
  Stratum stratum = Stratum::pelagic;
  double t_min = 0.0;
  double t_max = 0.0;
  double depth_min = 0.0;
  double depth_max = 0.0;
  double carrying_capacity = 0.0;  // K, tons
  double density = 0.0;            // k, tons/km^2
  double growth_rate = 0.0;        // r, per year
  double initial_biomass = 0.0;    // B0, tons

  double patch_capacity(double cell_area_km2) const { return density * cell_area_km2; }
  HabitatEnvelope envelope() const { return {t_min, t_max, depth_min, depth_max}; }
};

/// Throws ValidationError if any invariant of the parameter set is broken.
void validate_species(const SpeciesParams& sp, double cell_area_km2);

/// The four default model-species (coastal demersal/pelagic x Guinean/Saharan).
std::vector<SpeciesParams> default_species();

/// CSV: name,stratum,t_min,t_max,depth_min,depth_max,K_tons,k_tons_per_km2,r_per_year,B0_tons
std::vector<SpeciesParams> load_species(const std::filesystem::path& path);
void write_species(const std::filesystem::path& path, const std::vector<SpeciesParams>& species);

}  // namespace pirogue
