#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "worlds.hpp"

#include "pirogue/engine.hpp"
#include "pirogue/errors.hpp"
#include "pirogue/fleet.hpp"

using namespace pirogue;

namespace {

constexpr double kKmPerDegree = kEarthRadiusKm * std::numbers::pi / 180.0;

// Small in-memory world: species 0 demersal, species 1 pelagic, one site.
struct FleetWorld {
  EnvironmentGrid grid;
  std::vector<SpeciesParams> species;
  PopulationState pop;
  std::vector<LandingSite> sites;
  SiteCellDistances distances;
  FleetParams params;
  SimClock clock;
  Rng rng{7};
  std::vector<FleetEvent> events;

  explicit FleetWorld(EnvironmentGrid g) : grid(std::move(g)) {
    SpeciesParams d;
    d.id = 0;
    d.name = "dem";
    d.stratum = Stratum::demersal;
    d.density = 1e4;
    SpeciesParams p = d;
    p.id = 1;
    p.name = "pel";
    p.stratum = Stratum::pelagic;
    species = {d, p};
    pop = PopulationState(2, grid.cell_count());
  }

  // Site `km` due south of the center of `cell`.
  void add_site_south_of(CellId cell, double km, double capacity = 1e9, const std::string& name = "home") {
    const LatLon c = grid.center(cell);
    sites.push_back({name, {c.lat - km / kKmPerDegree, c.lon}, "X", capacity, 0.0, {}});
  }

  void finalize() { distances = SiteCellDistances(grid, sites); }

  FleetContext ctx() { return {grid, species, pop, sites, distances, params, clock, rng, events}; }

  FishingUnit unit(int category) const {
    FishingUnit fu;
    fu.category = category;
    return fu;
  }
};

EnvironmentGrid sea(int n = 20) { return testing::flat_grid(n, n, 50, 20); }

double landed_events(const std::vector<FleetEvent>& events) {
  double t = 0.0;
  for (const auto& e : events)
    if (e.kind == FleetEventKind::landing) t += e.tons;
  return t;
}

}  // namespace

TEST_SUITE("fleet") {
  TEST_CASE("catch step point values") {
    CHECK(catch_step(0.05, 100, 100) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(catch_step(1e-3, 500, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(catch_step(1e-2, 1e4, 100) == doctest::Approx(1e6 / 10100.0).epsilon(1e-12));
    CHECK(catch_step(1e-2, 1e4, 100) == doctest::Approx(99.0099).epsilon(1e-6));
    CHECK(catch_step(0.3, 0, 100) == 0.0);
    CHECK(catch_step(0.3, 0, 0) == 0.0);
  }

  TEST_CASE("catch step is increasing in biomass and linear in q") {
    double prev = 0.0;
    for (double b = 1; b < 1e6; b *= 1.7) {
      const double c = catch_step(1e-3, b, 100);
      CHECK(c > prev);
      prev = c;
      CHECK(catch_step(1e-2, b, 100) == doctest::Approx(10 * catch_step(1e-3, b, 100)).epsilon(1e-14));
    }
  }

  TEST_CASE("first-hour catch on a fresh large patch scales with q") {
    auto first_hour = [](double q) {
      FleetWorld w(sea());
      const CellId cell = w.grid.id({10, 10});
      w.add_site_south_of(cell, 0.0);
      w.finalize();
      w.pop.add_patch(0, cell, 1e6);
      w.params.of(1).catchability = q;
      w.params.of(1).storage_tons = 1e9;
      auto fu = w.unit(1);
      auto c = w.ctx();
      step_fu(fu, c);  // travel 1 h
      REQUIRE(fu.phase == TripPhase::fishing);
      step_fu(fu, c);
      return fu.hold;
    };
    const double a = first_hour(1e-6);
    CHECK(a == doctest::Approx(catch_step(1e-6, 1e6, 100)).epsilon(1e-14));
    CHECK(first_hour(1e-5) == doctest::Approx(10 * a).epsilon(1e-14));
  }

  TEST_CASE("trip target by category") {
    Rng rng(3);
    FishingUnit fu;
    fu.category = 1;
    for (int i = 0; i < 100; ++i) CHECK(select_trip_target(fu, rng) == Stratum::demersal);
    fu.category = 3;
    for (int i = 0; i < 100; ++i) CHECK(select_trip_target(fu, rng) == Stratum::pelagic);
    fu.category = 2;
    int demersal = 0;
    for (int i = 0; i < 10000; ++i) demersal += select_trip_target(fu, rng) == Stratum::demersal;
    CHECK(demersal / 10000.0 == doctest::Approx(0.5).epsilon(0.04));
  }

  TEST_CASE("travel hours") {
    CHECK(travel_hours(45, 10) == 5);
    CHECK(travel_hours(50, 10) == 5);
    CHECK(travel_hours(50.001, 10) == 6);
    CHECK(travel_hours(0, 10) == 1);
  }

  TEST_CASE("fishing grounds: radius and trip budget") {
    FleetWorld w(sea(30));
    const CellId near = w.grid.id({10, 5});
    const CellId far = w.grid.id({10, 20});
    w.add_site_south_of(near, 45.0);
    w.finalize();
    const double far_km = w.distances.km(0, far);
    REQUIRE(w.distances.km(0, near) == doctest::Approx(45.0).epsilon(1e-9));
    REQUIRE(far_km > 50.0);
    auto c = w.ctx();
    const auto fu = w.unit(1);
    CHECK(find_fishing_grounds(fu, Stratum::demersal, c).empty());
    w.pop.add_patch(0, near, 5000);
    w.pop.add_patch(0, far, 5000);
    w.pop.add_patch(1, w.grid.id({10, 6}), 5000);
    CHECK(find_fishing_grounds(fu, Stratum::demersal, c) == std::vector<CellId>{near});
    CHECK(find_fishing_grounds(fu, Stratum::pelagic, c) == std::vector<CellId>{w.grid.id({10, 6})});

    // Inside the radius but 2 * 6 + 1 > 12.
    FleetWorld v(sea());
    const CellId cell = v.grid.id({10, 10});
    v.add_site_south_of(cell, 55.0);
    v.finalize();
    v.params.of(1).radius_km = 1000;
    v.pop.add_patch(0, cell, 5000);
    auto vc = v.ctx();
    CHECK(find_fishing_grounds(v.unit(1), Stratum::demersal, vc).empty());
  }

  TEST_CASE("category 1 trip to a ground at 45 km: 5 h out, 2 h fishing, 5 h back") {
    FleetWorld w(sea());
    const CellId cell = w.grid.id({10, 10});
    w.add_site_south_of(cell, 45.0);
    w.finalize();
    w.pop.add_patch(0, cell, 1e6);
    w.params.of(1).catchability = 1e-8;
    auto fu = w.unit(1);
    auto c = w.ctx();
    std::vector<TripPhase> phases;
    step_fu(fu, c);
    phases.push_back(fu.phase);
    while (fu.phase != TripPhase::at_port) {
      step_fu(fu, c);
      phases.push_back(fu.phase);
    }
    CHECK(fu.trip_hours == 12);
    CHECK(std::count(phases.begin(), phases.end(), TripPhase::outbound) == 4);
    const double first = catch_step(1e-8, 1e6, 100);
    const double second = catch_step(1e-8, 1e6 - first, 100);
    CHECK(landed_events(w.events) == doctest::Approx(first + second).epsilon(1e-12));
    CHECK(fu.hold == 0.0);
    CHECK(w.sites[0].landed_today == landed_events(w.events));
    CHECK(fu.trips == 1);
    CHECK(fu.next_departure_day == 1);
    step_fu(fu, c);
    CHECK(fu.phase == TripPhase::at_port);  // one trip per day
  }

  TEST_CASE("full hold clips the catch and turns the unit home") {
    FleetWorld w(sea());
    const CellId cell = w.grid.id({10, 10});
    w.add_site_south_of(cell, 19.5);
    w.finalize();
    w.pop.add_patch(0, cell, 1e6);
    w.params.of(1).catchability = 3e-7;  // ~0.3 t/h against a 0.5 t hold
    auto fu = w.unit(1);
    auto c = w.ctx();
    for (int h = 0; h < 3; ++h) step_fu(fu, c);
    CHECK(fu.phase == TripPhase::fishing);
    CHECK(fu.hold == doctest::Approx(catch_step(3e-7, 1e6, 100)));
    step_fu(fu, c);
    CHECK(fu.hold == 0.5);
    CHECK(fu.phase == TripPhase::inbound);
    while (fu.phase != TripPhase::at_port) step_fu(fu, c);
    CHECK(fu.trip_hours == 6);
    CHECK(landed_events(w.events) == 0.5);
    CHECK(1e6 - w.pop.patch_at(0, cell)->biomass == doctest::Approx(0.5).epsilon(1e-12));
  }

  TEST_CASE("representation factor scales the hold") {
    FleetParams p;
    p.representation_factor = 10;
    CHECK(p.hold_capacity(1) == 5.0);
    CHECK(p.hold_capacity(3) == 300.0);
  }

  TEST_CASE("patch deleted under the unit with no neighbour patch sends it home with a partial hold") {
    FleetWorld w(sea());
    const CellId cell = w.grid.id({10, 10});
    w.add_site_south_of(cell, 19.5);
    w.finalize();
    w.pop.add_patch(0, cell, 1e6);
    w.params.of(1).catchability = 1e-7;
    auto fu = w.unit(1);
    auto c = w.ctx();
    for (int h = 0; h < 3; ++h) step_fu(fu, c);
    const double partial = fu.hold;
    REQUIRE(partial > 0.0);
    REQUIRE(partial < 0.5);
    w.pop.remove_patch(0, cell);
    step_fu(fu, c);
    CHECK(fu.phase == TripPhase::inbound);
    while (fu.phase != TripPhase::at_port) step_fu(fu, c);
    CHECK(landed_events(w.events) == partial);
  }

  TEST_CASE("empty cell with a neighbour patch: the unit hops") {
    FleetWorld w(sea());
    const CellId cell = w.grid.id({10, 10});
    const CellId next = w.grid.id({11, 11});
    w.add_site_south_of(cell, 19.5);
    w.finalize();
    w.pop.add_patch(0, cell, 1e6);
    w.pop.add_patch(0, next, 1e6);
    w.params.of(1).catchability = 1e-7;
    auto fu = w.unit(1);
    fu.next_departure_day = 0;
    auto c = w.ctx();
    // Force the destination: remove the neighbour until the unit is on its way.
    w.pop.remove_patch(0, next);
    for (int h = 0; h < 3; ++h) step_fu(fu, c);
    w.pop.add_patch(0, next, 1e6);
    w.pop.remove_patch(0, cell);
    step_fu(fu, c);
    CHECK(fu.phase == TripPhase::fishing);
    CHECK(fu.fishing_cell == next);
    const double before = fu.hold;
    step_fu(fu, c);
    CHECK(fu.hold > before);
  }

  TEST_CASE("category 3 unit without pelagic patches fishes demersal at reduced catchability") {
    FleetWorld w(sea());
    const CellId cell = w.grid.id({10, 10});
    w.add_site_south_of(cell, 19.5);
    w.finalize();
    w.pop.add_patch(0, cell, 1e6);
    w.params.of(3).catchability = 1e-5;
    auto fu = w.unit(3);
    auto c = w.ctx();
    for (int h = 0; h < 3; ++h) step_fu(fu, c);
    REQUIRE(fu.phase == TripPhase::fishing);
    const auto& p = w.params.of(3);
    CHECK(fu.hold == doctest::Approx(catch_step(p.catchability * p.demersal_access_fraction, 1e6, 100)).epsilon(1e-12));

    FleetWorld never(sea());
    never.add_site_south_of(cell, 19.5);
    never.finalize();
    never.pop.add_patch(0, cell, 1e6);
    never.params.incidental = IncidentalDemersal::never;
    never.params.of(3).campaign_prob = 0.0;
    auto fu2 = never.unit(3);
    auto c2 = never.ctx();
    step_fu(fu2, c2);
    CHECK(fu2.phase == TripPhase::at_port);
    CHECK(fu2.next_departure_day == 1);
  }

  TEST_CASE("category 3 unit stops at a pelagic patch on its route") {
    FleetWorld w(sea(30));
    const CellId dest = w.grid.id({25, 10});
    const CellId on_route = w.grid.id({15, 10});
    w.add_site_south_of(w.grid.id({0, 10}), 5.0);
    w.finalize();
    w.pop.add_patch(1, dest, 1e6);
    auto fu = w.unit(3);
    auto c = w.ctx();
    step_fu(fu, c);
    REQUIRE(fu.dest_cell == dest);
    w.pop.add_patch(1, on_route, 1e6);
    while (fu.phase == TripPhase::outbound) step_fu(fu, c);
    CHECK(fu.phase == TripPhase::fishing);
    CHECK(fu.fishing_cell == on_route);
  }

  TEST_CASE("landing at a saturated site diverts to the nearest open site") {
    FleetWorld w(sea());
    w.sites = default_sites();
    w.finalize();
    const SiteId kayar = *find_site(w.sites, "Kayar");
    CHECK(w.sites[static_cast<std::size_t>(kayar)].capacity == 450.0);
    w.sites[static_cast<std::size_t>(kayar)].landed_today = 500;
    auto fu = w.unit(2);
    fu.home_site = fu.base_site = fu.current_site = kayar;
    fu.hold = 3.0;
    auto c = w.ctx();
    const auto rec = land_catch(fu, c);

    SiteId expected = -1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < w.sites.size(); ++s) {
      if (static_cast<SiteId>(s) == kayar || is_saturated(w.sites[s])) continue;
      const double d = oracle::chord_distance_km(w.sites[static_cast<std::size_t>(kayar)].position.lat,
                                                 w.sites[static_cast<std::size_t>(kayar)].position.lon,
                                                 w.sites[s].position.lat, w.sites[s].position.lon);
      if (d < best) {
        best = d;
        expected = static_cast<SiteId>(s);
      }
    }
    CHECK(rec.diverted);
    CHECK(rec.site == expected);
    CHECK(fu.current_site == expected);
    CHECK(fu.short_migrations == 1);
    CHECK(fu.hold == 0.0);
    CHECK(w.sites[static_cast<std::size_t>(expected)].landed_today == 3.0);
    CHECK(w.sites[static_cast<std::size_t>(kayar)].landed_today == 500.0);
    REQUIRE(w.events.size() == 2);
    CHECK(w.events[1].kind == FleetEventKind::short_migration);
    CHECK(w.events[1].from == kayar);
    CHECK(w.events[1].to == expected);
  }

  TEST_CASE("landing at an open home site") {
    FleetWorld w(sea());
    w.sites = default_sites();
    w.finalize();
    const SiteId kayar = *find_site(w.sites, "Kayar");
    auto fu = w.unit(1);
    fu.home_site = fu.base_site = fu.current_site = kayar;
    fu.hold = 0.4;
    auto c = w.ctx();
    const auto rec = land_catch(fu, c);
    CHECK_FALSE(rec.diverted);
    CHECK(rec.site == kayar);
    CHECK(fu.short_migrations == 0);
    CHECK(w.sites[static_cast<std::size_t>(kayar)].landed_today == 0.4);
  }

  TEST_CASE("every site saturated: lands at the current site anyway") {
    FleetWorld w(sea());
    w.sites = default_sites();
    for (auto& s : w.sites) s.landed_today = s.capacity;
    w.finalize();
    auto fu = w.unit(1);
    fu.hold = 0.2;
    auto c = w.ctx();
    const auto rec = land_catch(fu, c);
    CHECK_FALSE(rec.diverted);
    CHECK(rec.site == 0);
    CHECK(fu.short_migrations == 0);
  }

  TEST_CASE("every site saturated and the current one closed: lands at the nearest open-capacity site") {
    FleetWorld w(sea());
    w.sites = default_sites();
    const SiteId kayar = *find_site(w.sites, "Kayar");
    const SiteId fass_boye = *find_site(w.sites, "Fass Boye");
    for (auto& s : w.sites) s.landed_today = s.capacity;
    w.sites[static_cast<std::size_t>(kayar)].capacity = 0.0;
    w.sites[static_cast<std::size_t>(fass_boye)].capacity = 0.0;
    w.finalize();
    auto fu = w.unit(1);
    fu.home_site = fu.base_site = fu.current_site = kayar;
    fu.hold = 0.2;
    auto c = w.ctx();
    const auto rec = land_catch(fu, c);

    SiteId expected = -1;
    double best = std::numeric_limits<double>::infinity();
    const auto& k = w.sites[static_cast<std::size_t>(kayar)].position;
    for (std::size_t s = 0; s < w.sites.size(); ++s) {
      if (w.sites[s].capacity <= 0.0) continue;
      const double d = oracle::chord_distance_km(k.lat, k.lon, w.sites[s].position.lat, w.sites[s].position.lon);
      if (d < best) {
        best = d;
        expected = static_cast<SiteId>(s);
      }
    }
    CHECK(rec.diverted);
    CHECK(rec.site == expected);
    CHECK(fu.short_migrations == 1);
    CHECK(w.sites[static_cast<std::size_t>(kayar)].landed_today == 450.0);
  }

  TEST_CASE("campaign probability 0 never migrates") {
    FleetWorld w(sea());
    w.sites = default_sites();
    w.finalize();
    w.params.of(3).campaign_prob = 0.0;
    auto c = w.ctx();
    for (int i = 0; i < 10000; ++i) {
      auto fu = w.unit(3);
      CHECK_FALSE(maybe_start_campaign(fu, c).has_value());
      CHECK(fu.long_migrations == 0);
    }
    CHECK(w.events.empty());
  }

  TEST_CASE("campaign durations are uniform on 1..max") {
    FleetWorld w(sea());
    w.sites = default_sites();
    w.finalize();
    w.params.of(3).campaign_prob = 1.0;
    w.params.of(3).campaign_max_months = 12;
    w.clock.month_index = 5;
    auto c = w.ctx();
    std::map<int, int> seen;
    double sum = 0.0;
    for (int i = 0; i < 10000; ++i) {
      auto fu = w.unit(3);
      const auto cmp = maybe_start_campaign(fu, c);
      REQUIRE(cmp.has_value());
      ++seen[cmp->months];
      sum += cmp->months;
      CHECK(fu.campaign_until_month == 5 + cmp->months);
      CHECK(fu.long_migrations == 1);
      CHECK(fu.current_site == cmp->destination);
      CHECK(fu.base_site == cmp->destination);
      CHECK(cmp->destination != 0);
    }
    CHECK(seen.size() == 12);
    CHECK(seen.begin()->first == 1);
    CHECK(seen.rbegin()->first == 12);
    CHECK(sum / 10000 == doctest::Approx(6.5).epsilon(0.2 / 6.5));
  }

  TEST_CASE("patches only off Mauritania draw the campaign to a Mauritanian site") {
    const auto grid = load_environment(testing::data_dir() / "fullscale" / "env", 0.0);
    FleetWorld w(grid);
    w.sites = default_sites();
    w.finalize();
    std::vector<CellId> north;
    for (const CellId c : grid.sea_cells())
      if (grid.center(c).lat > 19.0 && north.size() < 40) north.push_back(c);
    REQUIRE(north.size() == 40);
    for (std::size_t i = 0; i < north.size(); i += 4) w.pop.add_patch(1, north[i], 5000);
    w.params.of(3).campaign_prob = 1.0;

    SiteId expected = -1;
    double best = std::numeric_limits<double>::infinity();
    const SiteId from = *find_site(w.sites, "Joal");
    for (std::size_t s = 0; s < w.sites.size(); ++s) {
      if (static_cast<SiteId>(s) == from) continue;
      for (const auto& p : w.pop.patches(1)) {
        const double d = oracle::chord_distance_km(w.sites[s].position.lat, w.sites[s].position.lon,
                                                   grid.center(p.cell).lat, grid.center(p.cell).lon);
        if (d < best) {
          best = d;
          expected = static_cast<SiteId>(s);
        }
      }
    }
    auto fu = w.unit(3);
    fu.home_site = fu.base_site = fu.current_site = from;
    auto c = w.ctx();
    const auto cmp = maybe_start_campaign(fu, c);
    REQUIRE(cmp.has_value());
    CHECK(cmp->destination == expected);
    CHECK(w.sites[static_cast<std::size_t>(cmp->destination)].country == "Mauritania");
    REQUIRE(w.events.size() == 1);
    CHECK(w.events[0].kind == FleetEventKind::long_migration);
  }

  TEST_CASE("fleet file round trip and unknown site") {
    const auto dir = testing::scratch_dir("fleet_io");
    const std::vector<FleetComposition> fleet{{"Kayar", {2, 0, 1}}, {"Dakar", {0, 3, 0}}};
    write_fleet(dir / "f.csv", fleet);
    const auto back = load_fleet(dir / "f.csv");
    REQUIRE(back.size() == 2);
    CHECK(back[0].site == "Kayar");
    CHECK(back[1].counts == std::array<int, 3>{0, 3, 0});
    const auto units = build_fleet(back, default_sites());
    REQUIRE(units.size() == 6);
    CHECK(units[2].category == 3);
    CHECK(units[5].id == 5);
    CHECK(units[5].home_site == *find_site(default_sites(), "Dakar"));
    const std::vector<FleetComposition> bad{{"Atlantis", {1, 0, 0}}};
    CHECK_THROWS_AS(build_fleet(bad, default_sites()), ValidationError);
  }

  TEST_CASE("category validation") {
    auto p = default_categories()[0];
    CHECK_NOTHROW(validate_category(p));
    p.catchability = 1.5;
    CHECK_THROWS_AS(validate_category(p), ValidationError);
    p = default_categories()[2];
    p.campaign_prob = -0.1;
    CHECK_THROWS_AS(validate_category(p), ValidationError);
    p = default_categories()[1];
    p.max_trip_hours = 2;
    CHECK_THROWS_AS(validate_category(p), ValidationError);
  }
}

TEST_SUITE("fleet_properties") {
  TEST_CASE("hourly unit bounds over a desk run") {
    auto cfg = testing::desk_config();
    cfg.years = 1;
    Simulation sim(cfg);
    const auto& w = sim.world();
    std::vector<CellId> last_cell(w.fleet.size(), kNoCell);
    std::vector<TripPhase> last_phase(w.fleet.size(), TripPhase::at_port);
    std::int64_t trips = 0;
    std::int64_t violations = 0;
    while (!sim.done()) {
      sim.step_hour();
      for (std::size_t i = 0; i < w.fleet.size(); ++i) {
        const auto& fu = w.fleet[i];
        const auto& p = w.fleet_params.of(fu.category);
        if (fu.hold < 0.0 || fu.hold > w.fleet_params.hold_capacity(fu.category)) ++violations;
        if (fu.phase == TripPhase::at_port && fu.hold != 0.0) ++violations;
        if (fu.phase != TripPhase::at_port && fu.trip_hours > p.max_trip_hours) ++violations;
        if (fu.phase == TripPhase::fishing && fu.fishing_cell != last_cell[i]) {
          // New fishing cell: the destination, an en-route cell inside the radius, or a neighbour hop.
          const bool fresh = last_phase[i] != TripPhase::fishing;
          bool ok = false;
          if (fresh) {
            ok = fu.fishing_cell == fu.dest_cell ||
                 (fu.category == 3 && w.distances.km(fu.current_site, fu.fishing_cell) <= p.radius_km + 15.0);
            if (fu.fishing_cell == fu.dest_cell) ok = ok && w.distances.km(fu.current_site, fu.dest_cell) <= p.radius_km;
          } else {
            const Cell a = w.grid.cell(fu.fishing_cell);
            const Cell b = w.grid.cell(last_cell[i]);
            ok = std::abs(a.row - b.row) <= 1 && std::abs(a.col - b.col) <= 1;
          }
          if (!ok) ++violations;
        }
        if (fu.phase == TripPhase::outbound && last_phase[i] == TripPhase::at_port) ++trips;
        last_cell[i] = fu.phase == TripPhase::fishing ? fu.fishing_cell : kNoCell;
        last_phase[i] = fu.phase;
      }
      if (w.clock.hour == 0) sim.check_invariants();
    }
    sim.finish();
    CHECK(violations == 0);
    CHECK(trips > 1000);
  }

  TEST_CASE("landed total equals the harvested ledger") {
    auto cfg = testing::desk_config();
    const auto out = run(cfg);
    REQUIRE(out.valid);
    double harvested = 0.0;
    for (const auto& l : out.ledgers) harvested += l.harvested;
    CHECK(out.total_landed > 0.0);
    CHECK(out.total_landed == doctest::Approx(harvested).epsilon(1e-12));
    double frames = 0.0;
    for (const auto& f : out.frames)
      for (const double t : f.landings) frames += t;
    CHECK(frames == doctest::Approx(harvested).epsilon(1e-12));
  }

  TEST_CASE("migration counters match the migration records") {
    auto cfg = testing::desk_config();
    Simulation sim(cfg);
    while (!sim.done()) sim.step_day();
    sim.finish();
    const auto out = sim.outputs();
    std::int64_t shorts = 0, longs = 0;
    for (const auto& m : out.migrations) {
      (m.long_term ? longs : shorts) += 1;
      if (!m.long_term) CHECK(m.from != m.to);
    }
    std::int64_t fu_short = 0, fu_long = 0;
    for (const auto& fu : sim.world().fleet) {
      fu_short += fu.short_migrations;
      fu_long += fu.long_migrations;
    }
    CHECK(shorts == fu_short);
    CHECK(longs == fu_long);
    CHECK(out.frames.back().short_migrations == shorts);
    CHECK(out.frames.back().long_migrations == longs);
  }
}
