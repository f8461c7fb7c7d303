#include "pirogue/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "pirogue/errors.hpp"

namespace pirogue {

WorldInputs load_inputs(const RunConfig& config) {
  WorldInputs in;
  in.grid = load_environment(config.env_dir, 0.0);
  in.species = config.species_path.empty() ? default_species() : load_species(config.species_path);
  in.sites = config.sites_path.empty() ? default_sites() : load_sites(config.sites_path);
  in.fleet = load_fleet(config.fleet_path);
  return in;
}

Simulation::Simulation(const RunConfig& config) : Simulation(config, load_inputs(config)) {}

Simulation::Simulation(const RunConfig& config, const WorldInputs& inputs) {
  validate_run_config(config);
  world_.config = config;
  initialize(inputs);
}

void Simulation::initialize(const WorldInputs& inputs) {
  auto& w = world_;
  w.grid = inputs.grid.with_delta_sst(w.config.delta_sst);
  w.species = inputs.species;
  for (std::size_t i = 0; i < w.species.size(); ++i) {
    w.species[i].id = static_cast<SpeciesId>(i);
    validate_species(w.species[i], w.grid.cell_area_km2());
  }
  if (inputs.sites.empty()) throw ValidationError("no landing sites");
  w.sites = inputs.sites;
  for (auto& s : w.sites) {
    s.landed_today = 0.0;
    s.daily_landings.clear();
  }
  w.fleet = build_fleet(inputs.fleet, w.sites);
  w.next_fu_id = static_cast<int>(w.fleet.size());
  w.fleet_params = w.config.fleet_params();
  w.clock = SimClock{};
  w.clock.year = w.config.start_year;
  w.rng = Rng(w.config.seed);
  w.distances = SiteCellDistances(w.grid, w.sites);

  horizon_hours_ = days_in_span(1, w.config.total_months()) * 24;

  const auto countries = site_countries(w.sites);
  country_catch_.assign(countries.size(), 0.0);
  for (const auto& s : w.sites)
    site_country_.push_back(static_cast<std::size_t>(std::find(countries.begin(), countries.end(), s.country) - countries.begin()));

  scheduled_ = w.config.interventions;
  std::stable_sort(scheduled_.begin(), scheduled_.end(),
                   [](const ScheduledIntervention& a, const ScheduledIntervention& b) { return a.day < b.day; });
  for (const auto& s : scheduled_) validate_intervention(s.command);

  refresh_masks();
  w.pop = init_populations(w.species, w.grid, w.masks, w.rng);

  day_spin_up_ = true;
  emit_frame();
}

void Simulation::refresh_masks() {
  auto& w = world_;
  const std::size_t layer = w.grid.layer_index(w.clock);
  if (layer == w.mask_layer && w.masks.size() == w.species.size()) return;
  w.masks.clear();
  for (const auto& sp : w.species) w.masks.push_back(habitat_mask(w.grid, sp.envelope(), w.clock));
  w.mask_layer = layer;
}

void Simulation::emit_frame() {
  const auto& w = world_;
  MonitorFrame f;
  f.index = static_cast<std::int64_t>(frames_.size());
  f.date = w.clock.date_string();
  f.spin_up = day_spin_up_;
  f.fu_count.assign(w.sites.size(), {0, 0, 0});
  for (const auto& fu : w.fleet) ++f.fu_count[static_cast<std::size_t>(fu.current_site)][static_cast<std::size_t>(fu.category - 1)];
  for (const auto& s : w.sites) f.landings.push_back(s.landed_today);
  for (const auto& sp : w.species) f.biomass.push_back(w.pop.total_biomass(sp.id));
  f.short_migrations = short_total_;
  f.long_migrations = long_total_;
  f.catch_by_country = country_catch_;
  frames_.push_back(std::move(f));
  if (sink_) sink_(frames_.back());
}

void Simulation::record_events() {
  for (const auto& e : events_) {
    switch (e.kind) {
      case FleetEventKind::landing:
        country_catch_[site_country_[static_cast<std::size_t>(e.to)]] += e.tons;
        break;
      case FleetEventKind::short_migration:
        ++short_total_;
        migrations_.push_back({world_.clock.date_string(), e.fu_id, false, e.from, e.to});
        break;
      case FleetEventKind::long_migration:
        ++long_total_;
        migrations_.push_back({world_.clock.date_string(), e.fu_id, true, e.from, e.to});
        break;
      case FleetEventKind::campaign_end:
        break;
    }
  }
  events_.clear();
}

void Simulation::day_boundary() {
  auto& w = world_;
  if (hours_done_ > 0) {
    reset_daily(w.sites);
    day_spin_up_ = w.clock.month_index < 12;
  }
  drain_queue();
  if (w.clock.at_month_start()) month_boundary();
  for (const auto& sp : w.species)
    if (sp.stratum == Stratum::pelagic) move_patches(w.pop, sp, w.grid, w.masks[static_cast<std::size_t>(sp.id)], w.rng);
}

void Simulation::month_boundary() {
  auto& w = world_;
  for (auto& fu : w.fleet) {
    if (!fu.campaign_until_month || w.clock.month_index < *fu.campaign_until_month) continue;
    fu.campaign_until_month.reset();
    fu.base_site = fu.home_site;
    if (fu.phase == TripPhase::at_port) fu.current_site = fu.home_site;
  }
  refresh_masks();
  for (const auto& sp : w.species)
    if (sp.stratum == Stratum::demersal) move_patches(w.pop, sp, w.grid, w.masks[static_cast<std::size_t>(sp.id)], w.rng);
}

void Simulation::step_hour() {
  if (done() || finished_) return;
  auto& w = world_;
  const bool day_start = w.clock.at_day_start();
  const bool breeding = w.clock.at_month_start() && w.clock.month_index % (12 / w.config.reproduction_per_year) == 0;
  if (day_start) day_boundary();

  FleetContext ctx{w.grid, w.species, w.pop, w.sites, w.distances, w.fleet_params, w.clock, w.rng, events_};
  for (auto& fu : w.fleet) step_fu(fu, ctx);
  record_events();

  if (breeding) {
    for (const auto& sp : w.species)
      reproduce(w.pop, sp, w.config.reproduction_per_year, w.grid, w.masks[static_cast<std::size_t>(sp.id)], w.rng);
  }

  w.clock.advance_hour();
  ++hours_done_;
  if (w.clock.at_day_start()) close_day();
  if (w.config.check_invariants && (w.clock.at_day_start() || done())) check_invariants();
}

void Simulation::step_day() {
  for (int h = 0; h < 24 && !done(); ++h) step_hour();
}

void Simulation::land_at_current(FishingUnit& fu) {
  if (fu.hold > 0.0) {
    record_landing(world_.sites[static_cast<std::size_t>(fu.current_site)], fu.hold);
    events_.push_back({FleetEventKind::landing, world_.clock.day_index, fu.id, fu.category, fu.current_site, fu.current_site, fu.hold});
  }
  fu.hold = 0.0;
  fu.phase = TripPhase::at_port;
  fu.dest_cell = kNoCell;
  fu.fishing_cell = kNoCell;
  fu.hours_remaining = 0;
}

void Simulation::close_day() {
  if (done())
    for (auto& fu : world_.fleet)
      if (fu.phase != TripPhase::at_port) land_at_current(fu);
  record_events();
  emit_frame();
}

void Simulation::finish() {
  if (finished_) return;
  if (!done() && hours_done_ > 0) {
    const bool mid_day = !world_.clock.at_day_start();
    std::vector<double> landed;
    for (const auto& s : world_.sites) landed.push_back(s.landed_today);
    for (auto& fu : world_.fleet)
      if (fu.phase != TripPhase::at_port) land_at_current(fu);
    record_events();
    if (mid_day) {
      emit_frame();
    } else {
      // Stopped on a day boundary: the closing frame is already out; fold the holds into it.
      auto& f = frames_.back();
      for (std::size_t i = 0; i < world_.sites.size(); ++i) f.landings[i] += world_.sites[i].landed_today - landed[i];
      f.catch_by_country = country_catch_;
    }
  }
  if (hours_done_ > 0) reset_daily(world_.sites);
  finished_ = true;
  if (world_.config.check_invariants) check_invariants();
}

void Simulation::validate_intervention(const Intervention& cmd) const {
  using K = Intervention::Kind;
  if (cmd.kind == K::set_site_capacity || cmd.kind == K::add_units || cmd.kind == K::remove_units) {
    if (!find_site(world_.sites, cmd.site)) throw ValidationError("unknown landing site '" + cmd.site + "'");
  }
  if (cmd.kind == K::set_site_capacity && !(cmd.value >= 0.0)) throw ValidationError("capacity must be non-negative");
  if (cmd.kind == K::scale_catchability) {
    if (!(cmd.value >= 0.0)) throw ValidationError("catchability factor must be non-negative");
    for (int c = 1; c <= kCategoryCount; ++c)
      if ((cmd.category == 0 || cmd.category == c) && world_.fleet_params.of(c).catchability * cmd.value > 1.0)
        throw ValidationError("scaled catchability would exceed 1");
  }
  if (cmd.kind == K::set_campaign_prob && !(cmd.value >= 0.0 && cmd.value <= 1.0))
    throw ValidationError("campaign probability must lie in [0, 1]");
  if ((cmd.kind == K::scale_catchability || cmd.kind == K::set_campaign_prob) && (cmd.category < 0 || cmd.category > 3))
    throw ValidationError("category must be 1, 2, 3 or all");
  if ((cmd.kind == K::add_units || cmd.kind == K::remove_units) && (cmd.category < 1 || cmd.category > 3))
    throw ValidationError("category must be 1, 2 or 3");
  if (cmd.kind == K::add_units && cmd.count < 0) throw ValidationError("count must be non-negative");
  if (cmd.kind == K::remove_units && cmd.count < -1) throw ValidationError("count must be non-negative or all");
}

void Simulation::apply_intervention(const Intervention& cmd) {
  validate_intervention(cmd);
  auto& w = world_;
  using K = Intervention::Kind;
  switch (cmd.kind) {
    case K::set_site_capacity:
      w.sites[static_cast<std::size_t>(*find_site(w.sites, cmd.site))].capacity = cmd.value;
      break;
    case K::scale_catchability:
      for (int c = 1; c <= kCategoryCount; ++c)
        if (cmd.category == 0 || cmd.category == c) w.fleet_params.of(c).catchability *= cmd.value;
      break;
    case K::set_campaign_prob:
      for (int c = 1; c <= kCategoryCount; ++c)
        if (cmd.category == 0 || cmd.category == c) w.fleet_params.of(c).campaign_prob = cmd.value;
      break;
    case K::add_units: {
      const SiteId site = *find_site(w.sites, cmd.site);
      for (int k = 0; k < cmd.count; ++k) {
        FishingUnit fu;
        fu.id = w.next_fu_id++;
        fu.category = cmd.category;
        fu.home_site = fu.base_site = fu.current_site = site;
        fu.next_departure_day = w.clock.day_index;
        w.fleet.push_back(fu);
      }
      break;
    }
    case K::remove_units: {
      const SiteId site = *find_site(w.sites, cmd.site);
      // Most recently added units leave first.
      int left = cmd.count < 0 ? static_cast<int>(w.fleet.size()) : cmd.count;
      for (auto it = w.fleet.rbegin(); it != w.fleet.rend() && left > 0; ++it) {
        if (it->home_site != site || it->category != cmd.category) continue;
        land_at_current(*it);
        it->id = -1;
        --left;
      }
      record_events();
      std::erase_if(w.fleet, [](const FishingUnit& fu) { return fu.id < 0; });
      break;
    }
  }
  applied_.push_back({w.clock.day_index, w.clock.date_string(), cmd});
  if (intervention_sink_) intervention_sink_(applied_.back());
}

void Simulation::queue_intervention(const Intervention& cmd) {
  if (finished_ || done()) throw ValidationError("run has ended");
  validate_intervention(cmd);
  queue_.push_back(cmd);
}

void Simulation::drain_queue() {
  while (next_scheduled_ < scheduled_.size() && scheduled_[next_scheduled_].day <= world_.clock.day_index)
    apply_intervention(scheduled_[next_scheduled_++].command);
  while (!queue_.empty()) {
    const Intervention cmd = queue_.front();
    queue_.pop_front();
    apply_intervention(cmd);
  }
}

std::string Simulation::next_effective_date() const {
  SimClock c = world_.clock;
  while (c.hour != 0) c.advance_hour();
  return c.date_string();
}

double Simulation::in_transit() const {
  double sum = 0.0;
  for (const auto& fu : world_.fleet) sum += fu.hold;
  return sum;
}

double Simulation::total_landed() const {
  double sum = 0.0;
  for (const double c : country_catch_) sum += c;
  return sum;
}

namespace {
bool close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}
}  // namespace

void Simulation::check_invariants() const {
  const auto& w = world_;
  double harvested = 0.0;
  for (const auto& sp : w.species) {
    const auto& l = w.pop.ledger(sp.id);
    const double b = w.pop.total_biomass(sp.id);
    // Relative to the gross inflow: a depleted stock keeps rounding residue of its past flows.
    const double flow = std::max({1.0, l.initial + l.growth, b});
    if (std::abs(l.expected_biomass() - b) > 1e-9 * flow) {
      char msg[256];
      std::snprintf(msg, sizeof msg, "ledger %.17g t, patches %.17g t", l.expected_biomass(), b);
      throw InvariantError("biomass ledger of '" + sp.name + "' out of balance: " + msg);
    }
    for (const auto& p : w.pop.patches(sp.id))
      if (!(p.biomass >= kPatchDeletionThreshold - 1e-9) || !w.grid.is_sea(p.cell))
        throw InvariantError("invalid patch of '" + sp.name + "' in cell " + std::to_string(p.cell));
    harvested += l.harvested;
  }
  double site_total = 0.0;
  for (const auto& s : w.sites) {
    site_total += s.landed_today;
    for (const double d : s.daily_landings) site_total += d;
  }
  const double landed = total_landed();
  if (!close(site_total, landed, 1e-9)) throw InvariantError("site landings disagree with fleet landings");
  if (!close(harvested, landed + in_transit(), 1e-9))
    throw InvariantError("harvest ledger " + std::to_string(harvested) + " t != landed + in holds " +
                         std::to_string(landed + in_transit()) + " t");
  for (const auto& fu : w.fleet) {
    if (fu.hold < 0.0 || fu.hold > w.fleet_params.hold_capacity(fu.category) * (1.0 + 1e-12))
      throw InvariantError("unit " + std::to_string(fu.id) + " hold out of bounds");
    if (fu.phase == TripPhase::at_port && fu.hold != 0.0)
      throw InvariantError("unit " + std::to_string(fu.id) + " holds fish at port");
  }
}

RunOutputs Simulation::outputs() const {
  const auto& w = world_;
  RunOutputs out;
  out.config = w.config;
  for (const auto& s : w.sites) {
    out.site_names.push_back(s.name);
    out.site_countries.push_back(s.country);
  }
  out.countries = site_countries(w.sites);
  for (const auto& sp : w.species) {
    out.species_names.push_back(sp.name);
    out.ledgers.push_back(w.pop.ledger(sp.id));
    out.final_biomass.push_back(w.pop.total_biomass(sp.id));
  }
  out.frames = frames_;
  out.migrations = migrations_;
  out.interventions = applied_;
  // The echoed config replays the run, steering included.
  out.config.interventions.clear();
  for (const auto& a : applied_) out.config.interventions.push_back({a.day, a.command});
  out.total_landed = total_landed();
  return out;
}

RunOutputs run(const RunConfig& config, const WorldInputs& inputs, const FrameSink& sink) {
  Simulation sim(config, inputs);
  if (sink) sim.set_frame_sink(sink);
  try {
    while (!sim.done()) sim.step_hour();
    sim.finish();
  } catch (const InvariantError& e) {
    auto out = sim.outputs();
    out.valid = false;
    out.error = e.what();
    return out;
  }
  return sim.outputs();
}

RunOutputs run(const RunConfig& config, const FrameSink& sink) { return run(config, load_inputs(config), sink); }

}  // namespace pirogue
