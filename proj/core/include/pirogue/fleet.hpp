#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pirogue/calendar.hpp"
#include "pirogue/env_grid.hpp"
#include "pirogue/population.hpp"
#include "pirogue/ports.hpp"
#include "pirogue/rng.hpp"
#include "pirogue/species.hpp"

namespace pirogue {

inline constexpr int kCategoryCount = 3;

/// Per-category behaviour of fishing units (categories 1..3: line, gillnet, purse seine).
struct FleetCategoryParams {
  int category = 1;
  double storage_tons = 0.5;
  double radius_km = 50.0;
  int max_trip_hours = 12;
  double catchability = 1e-4;  // fraction of patch biomass per hour
  double campaign_prob = 0.1;
  int campaign_max_months = 4;
  double demersal_access_fraction = 0.0;
  double speed_kmh = 10.0;

  friend bool operator==(const FleetCategoryParams&, const FleetCategoryParams&) = default;
};

std::array<FleetCategoryParams, kCategoryCount> default_categories();
void validate_category(const FleetCategoryParams& p);

/// When a category-3 unit may catch demersal patches.
enum class IncidentalDemersal { never, when_no_pelagic, always };

struct FleetParams {
  std::array<FleetCategoryParams, kCategoryCount> categories = default_categories();
  double b_crit = 100.0;                // Holling-III half-saturation, tons
  double representation_factor = 1.0;   // real units per model unit
  IncidentalDemersal incidental = IncidentalDemersal::when_no_pelagic;

  const FleetCategoryParams& of(int category) const { return categories.at(static_cast<std::size_t>(category - 1)); }
  FleetCategoryParams& of(int category) { return categories.at(static_cast<std::size_t>(category - 1)); }
  double hold_capacity(int category) const { return of(category).storage_tons * representation_factor; }
};

/// Catch in one fishing hour: q b^2 / (b + b_crit); q b when b_crit = 0; 0 when b = 0.
double catch_step(double catchability, double biomass, double b_crit);

enum class TripPhase { at_port, outbound, fishing, inbound };

struct FishingUnit {
  int id = 0;
  int category = 1;
  SiteId home_site = 0;
  SiteId base_site = 0;     // home, or the campaign site while on campaign
  SiteId current_site = 0;  // where the unit is moored or departed from
  TripPhase phase = TripPhase::at_port;
  Stratum trip_target = Stratum::demersal;
  bool incidental_trip = false;  // category 3 diverted to demersal grounds
  CellId dest_cell = kNoCell;
  CellId fishing_cell = kNoCell;
  int hours_remaining = 0;
  int trip_hours = 0;
  int outbound_hours = 0;
  double hold = 0.0;
  std::optional<std::int64_t> campaign_until_month;
  std::int64_t next_departure_day = 0;

  std::int64_t hours_at_sea = 0;
  std::int64_t trips = 0;
  std::int64_t short_migrations = 0;
  std::int64_t long_migrations = 0;

  double days_at_sea() const { return static_cast<double>(hours_at_sea) / 24.0; }
};

/// Haversine distances from every site to every cell center, computed once per world.
class SiteCellDistances {
 public:
  SiteCellDistances() = default;
  SiteCellDistances(const EnvironmentGrid& grid, std::span<const LandingSite> sites);
  double km(SiteId site, CellId cell) const { return km_[static_cast<std::size_t>(site) * cells_ + static_cast<std::size_t>(cell)]; }
  double site_km(SiteId a, SiteId b) const { return site_km_[static_cast<std::size_t>(a) * sites_ + static_cast<std::size_t>(b)]; }

 private:
  std::size_t cells_ = 0;
  std::size_t sites_ = 0;
  std::vector<double> km_;
  std::vector<double> site_km_;
};

/// Straight-line travel time in whole hours, at least one.
int travel_hours(double distance_km, double speed_kmh);

enum class FleetEventKind { landing, short_migration, long_migration, campaign_end };

struct FleetEvent {
  FleetEventKind kind = FleetEventKind::landing;
  std::int64_t day = 0;
  int fu_id = 0;
  int category = 1;
  SiteId from = 0;
  SiteId to = 0;
  double tons = 0.0;
};

/// Everything a unit reads or mutates during one hour.
struct FleetContext {
  const EnvironmentGrid& grid;
  std::span<const SpeciesParams> species;
  PopulationState& pop;
  std::vector<LandingSite>& sites;
  const SiteCellDistances& distances;
  const FleetParams& params;
  const SimClock& clock;
  Rng& rng;
  std::vector<FleetEvent>& events;
};

/// Category 1 always demersal, category 3 always pelagic, category 2 a fair coin.
Stratum select_trip_target(const FishingUnit& fu, Rng& rng);

/**
 * Cells within the category radius of the unit's current site holding a patch
 * of `target`, restricted to those where 2 * travel_hours + 1 <= max_trip.
 * Ascending cell order.
 */
std::vector<CellId> find_fishing_grounds(const FishingUnit& fu, Stratum target, const FleetContext& ctx);

/// One simulated hour of a unit's trip state machine.
void step_fu(FishingUnit& fu, FleetContext& ctx);

struct LandingRecord {
  SiteId site = 0;
  double tons = 0.0;
  bool diverted = false;
};

/// Lands the hold at the current site, or the nearest unsaturated site if it is saturated.
/// With every site saturated the unit stays, unless its site has capacity 0; then it
/// goes to the nearest site with positive capacity.
LandingRecord land_catch(FishingUnit& fu, FleetContext& ctx);

struct Campaign {
  SiteId destination = 0;
  int months = 0;
};

/**
 * With probability campaign_prob relocates the unit to the unsaturated site
 * (other than its current one) closest to a patch of its target stratum, for
 * a uniform {1..campaign_max_months} months.
 */
std::optional<Campaign> maybe_start_campaign(FishingUnit& fu, FleetContext& ctx);

/// CSV `site,cat1,cat2,cat3` with counts of model units per home site.
struct FleetComposition {
  std::string site;
  std::array<int, kCategoryCount> counts{};
};
std::vector<FleetComposition> load_fleet(const std::filesystem::path& path);
void write_fleet(const std::filesystem::path& path, std::span<const FleetComposition> fleet);

/// Instantiates units in file order, categories ascending, ids 0..n-1.
std::vector<FishingUnit> build_fleet(std::span<const FleetComposition> fleet, std::span<const LandingSite> sites);

}  // namespace pirogue
