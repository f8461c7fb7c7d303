#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pirogue/geo.hpp"

namespace pirogue {

using SiteId = int;

/// Coastal landing node with a daily processing capacity.
struct LandingSite {
  std::string name;
  LatLon position;
  std::string country;
  double capacity = 0.0;  // tons/day
  double landed_today = 0.0;
  std::vector<double> daily_landings;  // archived at each day close
};

/// Adds `tons` to today's landings. Throws InvariantError on negative tons.
void record_landing(LandingSite& site, double tons);

/// True once today's landings reach the daily capacity (capacity 0 is always saturated).
inline bool is_saturated(const LandingSite& site) { return site.landed_today >= site.capacity; }

/// Archives every site's landings for the day and zeroes the counters.
void reset_daily(std::span<LandingSite> sites);

std::optional<SiteId> find_site(std::span<const LandingSite> sites, std::string_view name);

/// The fifteen default sites from Mauritania to Guinea with 2020 capacities.
std::vector<LandingSite> default_sites();
/// Same sites, total capacity spread evenly, optionally scaled.
std::vector<LandingSite> homogeneous_sites(double scale = 1.0);

/// CSV: name,lat,lon,country,capacity_tons_per_day
std::vector<LandingSite> load_sites(const std::filesystem::path& path);
void write_sites(const std::filesystem::path& path, std::span<const LandingSite> sites);

/// Distinct countries in first-appearance order.
std::vector<std::string> site_countries(std::span<const LandingSite> sites);

}  // namespace pirogue
