#include "pirogue/fleet.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>

#include "csv.hpp"
#include "pirogue/errors.hpp"

namespace pirogue {

std::array<FleetCategoryParams, kCategoryCount> default_categories() {
  return {{
      {1, 0.5, 50.0, 12, 1e-4, 0.1, 4, 0.0, 10.0},
      {2, 5.0, 100.0, 240, 1e-3, 0.2, 8, 0.0, 10.0},
      {3, 30.0, 1000.0, 240, 1e-2, 0.3, 12, 0.3, 10.0},
  }};
}

void validate_category(const FleetCategoryParams& p) {
  const std::string who = "category " + std::to_string(p.category) + ": ";
  if (p.category < 1 || p.category > kCategoryCount) throw ValidationError(who + "category must be 1, 2 or 3");
  if (!(p.storage_tons > 0.0) || !std::isfinite(p.storage_tons)) throw ValidationError(who + "storage must be positive");
  if (!(p.radius_km > 0.0) || !std::isfinite(p.radius_km)) throw ValidationError(who + "radius must be positive");
  if (p.max_trip_hours < 3) throw ValidationError(who + "max trip must be at least 3 hours");
  if (!(p.catchability >= 0.0 && p.catchability <= 1.0)) throw ValidationError(who + "catchability must lie in [0, 1]");
  if (!(p.campaign_prob >= 0.0 && p.campaign_prob <= 1.0)) throw ValidationError(who + "campaign probability must lie in [0, 1]");
  if (p.campaign_max_months < 1) throw ValidationError(who + "campaign_max_months must be at least 1");
  if (!(p.demersal_access_fraction >= 0.0 && p.demersal_access_fraction <= 1.0))
    throw ValidationError(who + "demersal access fraction must lie in [0, 1]");
  if (!(p.speed_kmh > 0.0) || !std::isfinite(p.speed_kmh)) throw ValidationError(who + "speed must be positive");
}

double catch_step(double catchability, double biomass, double b_crit) {
  if (biomass <= 0.0) return 0.0;
  if (b_crit == 0.0) return catchability * biomass;
  return catchability * biomass * biomass / (biomass + b_crit);
}

SiteCellDistances::SiteCellDistances(const EnvironmentGrid& grid, std::span<const LandingSite> sites)
    : cells_(grid.cell_count()), sites_(sites.size()), km_(sites.size() * grid.cell_count()),
      site_km_(sites.size() * sites.size()) {
  for (std::size_t s = 0; s < sites_; ++s) {
    for (std::size_t c = 0; c < cells_; ++c)
      km_[s * cells_ + c] = distance_km(sites[s].position, grid.center(static_cast<CellId>(c)));
    for (std::size_t t = 0; t < sites_; ++t) site_km_[s * sites_ + t] = distance_km(sites[s].position, sites[t].position);
  }
}

int travel_hours(double distance_km, double speed_kmh) {
  return std::max(1, static_cast<int>(std::ceil(distance_km / speed_kmh)));
}

Stratum select_trip_target(const FishingUnit& fu, Rng& rng) {
  switch (fu.category) {
    case 1: return Stratum::demersal;
    case 3: return Stratum::pelagic;
    default: return rng.uniform() < 0.5 ? Stratum::demersal : Stratum::pelagic;
  }
}

std::vector<CellId> find_fishing_grounds(const FishingUnit& fu, Stratum target, const FleetContext& ctx) {
  const auto& p = ctx.params.of(fu.category);
  std::vector<CellId> out;
  for (const auto& sp : ctx.species) {
    if (sp.stratum != target) continue;
    for (const auto& patch : ctx.pop.patches(sp.id)) {
      const double km = ctx.distances.km(fu.current_site, patch.cell);
      if (km > p.radius_km) continue;
      if (2 * travel_hours(km, p.speed_kmh) + 1 > p.max_trip_hours) continue;
      out.push_back(patch.cell);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

// Richest patch of a stratum in a cell (ties: lower species id).
const FishPatch* best_patch(const FleetContext& ctx, CellId cell, Stratum stratum) {
  const FishPatch* best = nullptr;
  for (const auto& sp : ctx.species) {
    if (sp.stratum != stratum) continue;
    const FishPatch* p = ctx.pop.patch_at(sp.id, cell);
    if (p != nullptr && (best == nullptr || p->biomass > best->biomass)) best = p;
  }
  return best;
}

bool has_patch(const FleetContext& ctx, CellId cell, Stratum stratum) { return best_patch(ctx, cell, stratum) != nullptr; }

// Whether the unit has anything to catch in `cell`.
bool catchable(const FishingUnit& fu, const FleetContext& ctx, CellId cell) {
  if (has_patch(ctx, cell, fu.trip_target)) return true;
  return fu.category == 3 && fu.trip_target == Stratum::pelagic && ctx.params.incidental != IncidentalDemersal::never &&
         has_patch(ctx, cell, Stratum::demersal);
}

double take_from(FishingUnit& fu, FleetContext& ctx, const FishPatch& patch, double q) {
  const double room = ctx.params.hold_capacity(fu.category) - fu.hold;
  if (room <= 0.0) return 0.0;
  const double want = std::min(catch_step(q, patch.biomass, ctx.params.b_crit), room);
  const double got = harvest_patch(ctx.pop, patch.species, patch.cell, want);
  fu.hold += got;
  return got;
}

// One hour of fishing in the unit's cell; returns false if nothing was there to catch.
bool fish_hour(FishingUnit& fu, FleetContext& ctx) {
  const auto& p = ctx.params.of(fu.category);
  const double incidental_q = p.catchability * p.demersal_access_fraction;
  const FishPatch* target = best_patch(ctx, fu.fishing_cell, fu.trip_target);
  if (fu.incidental_trip) {
    if (target == nullptr) return false;
    take_from(fu, ctx, *target, incidental_q);
    return true;
  }
  const bool cat3_pelagic = fu.category == 3 && fu.trip_target == Stratum::pelagic;
  if (target != nullptr) {
    take_from(fu, ctx, *target, p.catchability);
    if (cat3_pelagic && ctx.params.incidental == IncidentalDemersal::always) {
      if (const FishPatch* d = best_patch(ctx, fu.fishing_cell, Stratum::demersal)) take_from(fu, ctx, *d, incidental_q);
    }
    return true;
  }
  if (cat3_pelagic && ctx.params.incidental != IncidentalDemersal::never) {
    if (const FishPatch* d = best_patch(ctx, fu.fishing_cell, Stratum::demersal)) {
      take_from(fu, ctx, *d, incidental_q);
      return true;
    }
  }
  return false;
}

int return_hours(const FishingUnit& fu, const FleetContext& ctx, CellId cell) {
  return travel_hours(ctx.distances.km(fu.current_site, cell), ctx.params.of(fu.category).speed_kmh);
}

void start_inbound(FishingUnit& fu, const FleetContext& ctx) {
  fu.phase = TripPhase::inbound;
  fu.hours_remaining = return_hours(fu, ctx, fu.fishing_cell);
}

void finish_trip(FishingUnit& fu, FleetContext& ctx) {
  const bool empty = fu.hold <= 0.0;
  land_catch(fu, ctx);
  fu.phase = TripPhase::at_port;
  fu.dest_cell = kNoCell;
  fu.fishing_cell = kNoCell;
  fu.incidental_trip = false;
  fu.hours_remaining = 0;
  fu.next_departure_day = ctx.clock.day_index + 1;
  if (empty) maybe_start_campaign(fu, ctx);
}

bool depart(FishingUnit& fu, FleetContext& ctx) {
  fu.current_site = fu.base_site;
  fu.trip_target = select_trip_target(fu, ctx.rng);
  fu.incidental_trip = false;
  auto grounds = find_fishing_grounds(fu, fu.trip_target, ctx);
  if (grounds.empty() && fu.category == 3 && ctx.params.incidental != IncidentalDemersal::never) {
    grounds = find_fishing_grounds(fu, Stratum::demersal, ctx);
    fu.incidental_trip = !grounds.empty();
    if (fu.incidental_trip) fu.trip_target = Stratum::demersal;
  }
  if (grounds.empty()) {
    fu.next_departure_day = ctx.clock.day_index + 1;
    maybe_start_campaign(fu, ctx);
    return false;
  }
  fu.dest_cell = grounds[ctx.rng.below(grounds.size())];
  fu.fishing_cell = kNoCell;
  fu.outbound_hours = return_hours(fu, ctx, fu.dest_cell);
  fu.hours_remaining = fu.outbound_hours;
  fu.trip_hours = 0;
  fu.phase = TripPhase::outbound;
  ++fu.trips;
  return true;
}

// Cell under the unit after `done` of `total` outbound hours on the straight path.
std::optional<CellId> position_on_path(const FishingUnit& fu, const FleetContext& ctx, int done, int total) {
  const LatLon a = ctx.sites[static_cast<std::size_t>(fu.current_site)].position;
  const LatLon b = ctx.grid.center(fu.dest_cell);
  const double f = static_cast<double>(done) / total;
  return ctx.grid.cell_at({a.lat + f * (b.lat - a.lat), a.lon + f * (b.lon - a.lon)});
}

void outbound_hour(FishingUnit& fu, FleetContext& ctx) {
  --fu.hours_remaining;
  if (fu.hours_remaining <= 0) {
    fu.phase = TripPhase::fishing;
    fu.fishing_cell = fu.dest_cell;
    return;
  }
  if (fu.category != 3) return;
  const auto here = position_on_path(fu, ctx, fu.outbound_hours - fu.hours_remaining, fu.outbound_hours);
  if (!here || !ctx.grid.is_sea(*here) || !has_patch(ctx, *here, Stratum::pelagic)) return;
  if (fu.trip_hours + 1 + return_hours(fu, ctx, *here) > ctx.params.of(fu.category).max_trip_hours) return;
  fu.phase = TripPhase::fishing;
  fu.fishing_cell = *here;
  fu.trip_target = Stratum::pelagic;
  fu.incidental_trip = false;
}

void fishing_hour(FishingUnit& fu, FleetContext& ctx) {
  const int max_trip = ctx.params.of(fu.category).max_trip_hours;
  // trip_hours already counts the current hour.
  if (fu.trip_hours + return_hours(fu, ctx, fu.fishing_cell) > max_trip) {
    start_inbound(fu, ctx);
    --fu.hours_remaining;
    return;
  }
  if (fish_hour(fu, ctx)) {
    if (fu.hold >= ctx.params.hold_capacity(fu.category)) start_inbound(fu, ctx);
    return;
  }
  const Cell c = ctx.grid.cell(fu.fishing_cell);
  CellId options[8];
  int count = 0;
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if ((dr == 0 && dc == 0) || !ctx.grid.in_bounds(c.row + dr, c.col + dc)) continue;
      const CellId id = ctx.grid.id({c.row + dr, c.col + dc});
      if (!ctx.grid.is_sea(id) || !catchable(fu, ctx, id)) continue;
      if (fu.trip_hours + 1 + return_hours(fu, ctx, id) > max_trip) continue;
      options[count++] = id;
    }
  }
  if (count == 0) {
    start_inbound(fu, ctx);
    --fu.hours_remaining;
    return;
  }
  fu.fishing_cell = options[ctx.rng.below(static_cast<std::uint64_t>(count))];
}

}  // namespace

void step_fu(FishingUnit& fu, FleetContext& ctx) {
  if (fu.phase == TripPhase::at_port) {
    if (ctx.clock.day_index < fu.next_departure_day) return;
    if (!depart(fu, ctx)) return;
  }
  ++fu.trip_hours;
  ++fu.hours_at_sea;
  switch (fu.phase) {
    case TripPhase::outbound:
      outbound_hour(fu, ctx);
      break;
    case TripPhase::fishing:
      if (fu.fishing_cell == kNoCell) throw InvariantError("unit " + std::to_string(fu.id) + " fishing without a cell");
      fishing_hour(fu, ctx);
      break;
    case TripPhase::inbound:
      --fu.hours_remaining;
      break;
    case TripPhase::at_port:
      throw InvariantError("unit " + std::to_string(fu.id) + " stepped at port");
  }
  if (fu.phase == TripPhase::inbound && fu.hours_remaining <= 0) finish_trip(fu, ctx);
  if (fu.trip_hours > ctx.params.of(fu.category).max_trip_hours && fu.phase != TripPhase::at_port)
    throw InvariantError("unit " + std::to_string(fu.id) + " exceeded its maximum trip length");
}

LandingRecord land_catch(FishingUnit& fu, FleetContext& ctx) {
  LandingRecord rec{fu.current_site, fu.hold, false};
  if (fu.hold <= 0.0) {
    fu.hold = 0.0;
    return rec;
  }
  const SiteId from = fu.current_site;
  // Nearest other site passing `open`, random tie-break.
  const auto nearest_other = [&](auto open) -> std::optional<SiteId> {
    std::vector<SiteId> nearest;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < ctx.sites.size(); ++s) {
      if (static_cast<SiteId>(s) == from || !open(ctx.sites[s])) continue;
      const double d = ctx.distances.site_km(from, static_cast<SiteId>(s));
      if (d < best - 1e-9) {
        best = d;
        nearest.assign(1, static_cast<SiteId>(s));
      } else if (d <= best + 1e-9) {
        nearest.push_back(static_cast<SiteId>(s));
      }
    }
    if (nearest.empty()) return std::nullopt;
    return nearest.size() == 1 ? nearest[0] : nearest[ctx.rng.below(nearest.size())];
  };
  const auto& here = ctx.sites[static_cast<std::size_t>(from)];
  if (is_saturated(here)) {
    auto to = nearest_other([](const LandingSite& s) { return !is_saturated(s); });
    // Everything saturated: stay, unless this site is closed outright.
    if (!to && here.capacity <= 0.0) to = nearest_other([](const LandingSite& s) { return s.capacity > 0.0; });
    if (to) {
      rec.site = *to;
      rec.diverted = true;
    }
  }
  record_landing(ctx.sites[static_cast<std::size_t>(rec.site)], fu.hold);
  ctx.events.push_back({FleetEventKind::landing, ctx.clock.day_index, fu.id, fu.category, rec.site, rec.site, fu.hold});
  if (rec.diverted) {
    ++fu.short_migrations;
    fu.current_site = rec.site;
    ctx.events.push_back({FleetEventKind::short_migration, ctx.clock.day_index, fu.id, fu.category, from, rec.site, 0.0});
  }
  fu.hold = 0.0;
  return rec;
}

std::optional<Campaign> maybe_start_campaign(FishingUnit& fu, FleetContext& ctx) {
  const auto& p = ctx.params.of(fu.category);
  if (!ctx.rng.bernoulli(p.campaign_prob)) return std::nullopt;
  if (ctx.sites.size() < 2) return std::nullopt;
  const Stratum primary = fu.category == 1 ? Stratum::demersal : fu.category == 3 ? Stratum::pelagic : fu.trip_target;

  std::vector<SiteId> best_sites;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < ctx.sites.size(); ++s) {
    if (static_cast<SiteId>(s) == fu.current_site || is_saturated(ctx.sites[s])) continue;
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& sp : ctx.species) {
      if (sp.stratum != primary) continue;
      for (const auto& patch : ctx.pop.patches(sp.id))
        nearest = std::min(nearest, ctx.distances.km(static_cast<SiteId>(s), patch.cell));
    }
    if (!std::isfinite(nearest)) continue;
    if (nearest < best - 1e-9) {
      best = nearest;
      best_sites.assign(1, static_cast<SiteId>(s));
    } else if (nearest <= best + 1e-9) {
      best_sites.push_back(static_cast<SiteId>(s));
    }
  }
  SiteId dest = 0;
  if (best_sites.empty()) {
    // No reachable target patch anywhere (or every other site saturated): any other site.
    dest = static_cast<SiteId>(ctx.rng.below(ctx.sites.size() - 1));
    if (dest >= fu.current_site) ++dest;
  } else {
    dest = best_sites.size() == 1 ? best_sites[0] : best_sites[ctx.rng.below(best_sites.size())];
  }
  const int months = static_cast<int>(ctx.rng.between(1, p.campaign_max_months));
  const SiteId from = fu.current_site;
  fu.base_site = dest;
  fu.current_site = dest;
  fu.campaign_until_month = ctx.clock.month_index + months;
  ++fu.long_migrations;
  ctx.events.push_back({FleetEventKind::long_migration, ctx.clock.day_index, fu.id, fu.category, from, dest, 0.0});
  return Campaign{dest, months};
}

namespace {
const std::vector<std::string> kFleetHeader = {"site", "cat1", "cat2", "cat3"};
}

std::vector<FleetComposition> load_fleet(const std::filesystem::path& path) {
  const auto t = csv::read(path);
  csv::expect_header(t, kFleetHeader);
  std::vector<FleetComposition> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    FleetComposition f;
    f.site = t.rows[i][0];
    for (std::size_t c = 0; c < kCategoryCount; ++c) {
      f.counts[c] = t.integer(i, c + 1);
      if (f.counts[c] < 0) t.fail(i, "negative unit count");
    }
    out.push_back(std::move(f));
  }
  return out;
}

void write_fleet(const std::filesystem::path& path, std::span<const FleetComposition> fleet) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << "site,cat1,cat2,cat3\n";
  for (const auto& f : fleet) out << f.site << ',' << f.counts[0] << ',' << f.counts[1] << ',' << f.counts[2] << '\n';
}

std::vector<FishingUnit> build_fleet(std::span<const FleetComposition> fleet, std::span<const LandingSite> sites) {
  std::vector<FishingUnit> out;
  for (const auto& row : fleet) {
    const auto site = find_site(sites, row.site);
    if (!site) throw ValidationError("fleet references unknown landing site '" + row.site + "'");
    for (int cat = 1; cat <= kCategoryCount; ++cat) {
      for (int k = 0; k < row.counts[static_cast<std::size_t>(cat - 1)]; ++k) {
        FishingUnit fu;
        fu.id = static_cast<int>(out.size());
        fu.category = cat;
        fu.home_site = fu.base_site = fu.current_site = *site;
        out.push_back(fu);
      }
    }
  }
  return out;
}

}  // namespace pirogue
