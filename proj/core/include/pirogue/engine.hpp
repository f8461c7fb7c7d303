#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "pirogue/calendar.hpp"
#include "pirogue/config.hpp"
#include "pirogue/env_grid.hpp"
#include "pirogue/fleet.hpp"
#include "pirogue/intervention.hpp"
#include "pirogue/population.hpp"
#include "pirogue/ports.hpp"
#include "pirogue/rng.hpp"
#include "pirogue/species.hpp"

namespace pirogue {

/// Loaded input data of a run; shareable between runs with different parameters.
struct WorldInputs {
  EnvironmentGrid grid;  // offset 0; the run applies its own delta_sst
  std::vector<SpeciesParams> species;
  std::vector<LandingSite> sites;
  std::vector<FleetComposition> fleet;
};

WorldInputs load_inputs(const RunConfig& config);

/// Observation record archived once per simulated day.
struct MonitorFrame {
  std::int64_t index = 0;  // 0 is the initial state
  std::string date;        // snapshot instant (00:00); frame k closes simulated day k
  bool spin_up = false;  // within the first simulated year
  std::vector<std::array<int, kCategoryCount>> fu_count;  // per site, per category
  std::vector<double> landings;                            // per site, tons that day
  std::vector<double> biomass;                             // per species, tons
  std::int64_t short_migrations = 0;                       // cumulative
  std::int64_t long_migrations = 0;                        // cumulative
  std::vector<double> catch_by_country;                    // cumulative landed tons

  friend bool operator==(const MonitorFrame&, const MonitorFrame&) = default;
};

struct MigrationRecord {
  std::string date;
  int fu_id = 0;
  bool long_term = false;
  SiteId from = 0;
  SiteId to = 0;
  friend bool operator==(const MigrationRecord&, const MigrationRecord&) = default;
};

struct AppliedIntervention {
  std::int64_t day = 0;
  std::string date;
  Intervention command;
  friend bool operator==(const AppliedIntervention&, const AppliedIntervention&) = default;
};

struct RunOutputs {
  RunConfig config;  // interventions replaced by the ones actually applied
  std::vector<std::string> site_names;
  std::vector<std::string> site_countries;
  std::vector<std::string> countries;
  std::vector<std::string> species_names;
  std::vector<MonitorFrame> frames;
  std::vector<MigrationRecord> migrations;
  std::vector<AppliedIntervention> interventions;
  std::vector<SpeciesLedger> ledgers;
  std::vector<double> final_biomass;
  double total_landed = 0.0;
  bool valid = true;
  std::string error;
};

using FrameSink = std::function<void(const MonitorFrame&)>;
using InterventionSink = std::function<void(const AppliedIntervention&)>;

/// Mutable state of one run.
struct WorldState {
  EnvironmentGrid grid;
  SimClock clock;
  std::vector<SpeciesParams> species;
  PopulationState pop;
  std::vector<FishingUnit> fleet;
  std::vector<LandingSite> sites;
  SiteCellDistances distances;
  FleetParams fleet_params;
  Rng rng;
  RunConfig config;
  std::vector<HabitatMask> masks;  // per species, for the current month
  std::size_t mask_layer = static_cast<std::size_t>(-1);
  int next_fu_id = 0;
};

/**
 * @brief Deterministic hourly scheduler.
 *
 * Hour-0 work, in order: archive and reset site counters, apply due
 * interventions; on a month start also expire campaigns, refresh habitat
 * masks and move demersal patches; then move pelagic patches. Every hour each
 * unit steps in ascending id order. On the first hour of every (12/s)-th
 * month, reproduction follows the fleet step. Then the clock advances; when
 * that closes a day the day's frame is emitted (after landing any holds still
 * at sea if the horizon is reached). All randomness comes from one stream in
 * that order.
 */
class Simulation {
 public:
  Simulation(const RunConfig& config, const WorldInputs& inputs);
  explicit Simulation(const RunConfig& config);

  /// Total hours the configured horizon spans.
  std::int64_t horizon_hours() const { return horizon_hours_; }
  std::int64_t hours_done() const { return hours_done_; }
  bool done() const { return hours_done_ >= horizon_hours_; }
  bool finished() const { return finished_; }

  void step_hour();
  /// Steps up to 24 hours, stopping at the horizon.
  void step_day();
  /// Ends the run; when stopped before the horizon, lands holds still at sea at
  /// their departure site into the last frame. Idempotent.
  void finish();

  /// Queues a command for the next day boundary. Throws ValidationError if invalid.
  void queue_intervention(const Intervention& cmd);
  /// Applies a command immediately. Throws ValidationError with no state change if invalid.
  void apply_intervention(const Intervention& cmd);
  /// Date (ISO) at which a command queued now takes effect.
  std::string next_effective_date() const;

  void set_frame_sink(FrameSink sink) { sink_ = std::move(sink); }
  /// Called whenever an intervention takes effect.
  void set_intervention_sink(InterventionSink sink) { intervention_sink_ = std::move(sink); }

  const WorldState& world() const { return world_; }
  const std::vector<MonitorFrame>& frames() const { return frames_; }
  const std::vector<AppliedIntervention>& applied_interventions() const { return applied_; }
  /// Tons harvested but not yet landed (in holds at sea).
  double in_transit() const;
  double total_landed() const;

  /// Checks the conservation chain and per-unit bounds; throws InvariantError.
  void check_invariants() const;

  RunOutputs outputs() const;

 private:
  void initialize(const WorldInputs& inputs);
  void refresh_masks();
  void day_boundary();
  void close_day();
  void month_boundary();
  void emit_frame();
  void drain_queue();
  void record_events();
  void land_at_current(FishingUnit& fu);
  void validate_intervention(const Intervention& cmd) const;

  WorldState world_;
  std::int64_t horizon_hours_ = 0;
  std::int64_t hours_done_ = 0;
  bool finished_ = false;
  std::vector<MonitorFrame> frames_;
  std::vector<MigrationRecord> migrations_;
  std::vector<AppliedIntervention> applied_;
  std::deque<Intervention> queue_;
  std::vector<FleetEvent> events_;
  std::vector<double> country_catch_;
  std::vector<std::size_t> site_country_;
  std::int64_t short_total_ = 0;
  std::int64_t long_total_ = 0;
  std::vector<ScheduledIntervention> scheduled_;  // sorted by day
  std::size_t next_scheduled_ = 0;
  bool day_spin_up_ = true;
  FrameSink sink_;
  InterventionSink intervention_sink_;
};

/// Initializes, steps the full horizon and finishes. A runtime invariant
/// breach stops stepping and returns partial outputs with valid = false.
RunOutputs run(const RunConfig& config, const FrameSink& sink = {});
RunOutputs run(const RunConfig& config, const WorldInputs& inputs, const FrameSink& sink = {});

}  // namespace pirogue
