#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pirogue/fleet.hpp"
#include "pirogue/intervention.hpp"

namespace pirogue {

/**
 * @brief All inputs of one simulation run.
 *
 * Text form is flat `key = value` lines with `#` comments. Relative paths are
 * resolved against the config file's directory. Keys:
 *
 *   env_dir, fleet                  required paths
 *   sites, species                  optional paths (built-in defaults otherwise)
 *   seed, years, months, start_year
 *   reproduction_per_year           s, a divisor of 12
 *   b_crit, delta_sst, representation_factor, q_scale
 *   catN.q, catN.storage, catN.radius_km, catN.max_trip_hours,
 *   catN.campaign_prob, catN.campaign_max_months, catN.speed_kmh,
 *   cat3.demersal_access_fraction   (N = 1..3)
 *   incidental_demersal             never | when_no_pelagic | always
 *   check_invariants, out_dir
 *   intervention = <day> <command>  repeatable
 *
 * Category-3 catchability defaults follow the per-category table values;
 * `q_scale` multiplies all three.
 */
struct RunConfig {
  std::filesystem::path env_dir;
  std::filesystem::path sites_path;
  std::filesystem::path fleet_path;
  std::filesystem::path species_path;
  std::filesystem::path out_dir;

  std::uint64_t seed = 1;
  int years = 1;
  int months = 0;
  int start_year = 1979;
  int reproduction_per_year = 2;
  double b_crit = 100.0;
  double delta_sst = 0.0;
  double representation_factor = 1.0;
  double q_scale = 1.0;
  std::array<FleetCategoryParams, kCategoryCount> categories = default_categories();
  IncidentalDemersal incidental = IncidentalDemersal::when_no_pelagic;
  bool check_invariants = true;
  std::vector<ScheduledIntervention> interventions;

  int total_months() const { return years * 12 + months; }
  FleetParams fleet_params() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses and validates; errors carry key name and line. Checks that paths exist.
RunConfig parse_run_config(const std::filesystem::path& path);
RunConfig parse_run_config_text(std::string_view text, const std::filesystem::path& base_dir,
                                std::string_view origin = "<config>");

/// Sets one key from its text value, as the parser does. Throws ValidationError.
void set_config_value(RunConfig& config, std::string_view key, std::string_view value);
/// Numeric view of a key (for sensitivity and one-factor sweeps). Throws on unknown keys.
double get_numeric_value(const RunConfig& config, std::string_view key);
bool is_numeric_key(std::string_view key);

/// Range and consistency checks on a fully populated config.
void validate_run_config(const RunConfig& config);

/// Text form that `parse_run_config_text` reads back to an equal config.
std::string format_run_config(const RunConfig& config);

/// FNV-1a over the formatted config with the seed and output directory removed.
std::uint64_t config_hash(const RunConfig& config);

}  // namespace pirogue
