#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pirogue/env_grid.hpp"
#include "pirogue/rng.hpp"
#include "pirogue/species.hpp"

namespace pirogue {

/// Patches whose biomass falls below this many tons are deleted (senescence).
inline constexpr double kPatchDeletionThreshold = 100.0;

struct FishPatch {
  SpeciesId species = 0;
  CellId cell = kNoCell;
  double biomass = 0.0;
};

/**
 * Per-species biomass accounting. For every species at every instant:
 *   initial + growth - harvested - senescence == sum of patch biomass
 * `growth` counts placed increments only; increments that found no room
 * (remainders under the threshold, no free habitat) go to `unplaced_growth`.
 * `senescence` holds the residues of deleted patches and any part of the
 * initial biomass that could not be placed.
 */
struct SpeciesLedger {
  double initial = 0.0;
  double growth = 0.0;
  double unplaced_growth = 0.0;
  double harvested = 0.0;
  double senescence = 0.0;

  double expected_biomass() const { return initial + growth - harvested - senescence; }
};

class PopulationState {
 public:
  PopulationState() = default;
  PopulationState(std::size_t species_count, std::size_t cell_count);

  std::size_t species_count() const { return species_.size(); }
  std::size_t cell_count() const { return cell_count_; }

  std::span<const FishPatch> patches(SpeciesId sp) const { return species_.at(static_cast<std::size_t>(sp)).patches; }
  /// Patch of `sp` at `cell`, or nullptr.
  const FishPatch* patch_at(SpeciesId sp, CellId cell) const;
  bool occupied(SpeciesId sp, CellId cell) const { return patch_at(sp, cell) != nullptr; }

  double total_biomass(SpeciesId sp) const;
  const SpeciesLedger& ledger(SpeciesId sp) const { return species_.at(static_cast<std::size_t>(sp)).ledger; }
  SpeciesLedger& ledger(SpeciesId sp) { return species_.at(static_cast<std::size_t>(sp)).ledger; }

  /// Adds a patch at an unoccupied cell. Throws InvariantError if occupied.
  void add_patch(SpeciesId sp, CellId cell, double biomass);
  /// Removes the patch at `cell`; returns its biomass.
  double remove_patch(SpeciesId sp, CellId cell);
  /// Moves the patch at `from` to an unoccupied `to`.
  void move_patch(SpeciesId sp, CellId from, CellId to);
  void set_biomass(SpeciesId sp, CellId cell, double biomass);

 private:
  struct PerSpecies {
    std::vector<FishPatch> patches;
    std::vector<std::int32_t> slot_of_cell;  // -1 if empty
    SpeciesLedger ledger;
  };
  std::vector<PerSpecies> species_;
  std::size_t cell_count_ = 0;
};

/// Logistic increment for one reproduction event: (r/s) B (1 - B/K).
double logistic_growth(double biomass, double carrying_capacity, double growth_rate, int events_per_year);

/**
 * Places each species' initial biomass as full patches (patch_capacity) in
 * distinct uniformly random habitat cells; a final partial patch is placed if
 * it reaches the deletion threshold, otherwise booked as senescence.
 * Throws ValidationError if B0 is outside (0, K] or a habitat is empty.
 */
PopulationState init_populations(std::span<const SpeciesParams> species, const EnvironmentGrid& grid,
                                  const SimClock& clock, Rng& rng);
PopulationState init_populations(std::span<const SpeciesParams> species, const EnvironmentGrid& grid,
                                 std::span<const HabitatMask> masks, Rng& rng);

/// Outcome of one reproduction event, for logging and tests.
struct ReproductionResult {
  double growth = 0.0;
  int full_patches = 0;
  double remainder_placed = 0.0;
  double dropped = 0.0;
};

ReproductionResult reproduce(PopulationState& pop, const SpeciesParams& sp, int events_per_year,
                             const EnvironmentGrid& grid, const HabitatMask& mask, Rng& rng);
ReproductionResult reproduce(PopulationState& pop, const SpeciesParams& sp, int events_per_year,
                             const EnvironmentGrid& grid, const SimClock& clock, Rng& rng);

/**
 * Pelagic: each patch steps to a uniformly random 8-neighbour inside the mask
 * not held by the same species (stays if none); a patch whose own cell left
 * the habitat first relocates to the nearest free habitat cell.
 * Demersal: each patch jumps to a uniformly random free habitat cell.
 */
void move_patches(PopulationState& pop, const SpeciesParams& sp, const EnvironmentGrid& grid,
                  const HabitatMask& mask, Rng& rng);
void move_patches(PopulationState& pop, const SpeciesParams& sp, const EnvironmentGrid& grid,
                  const SimClock& clock, Rng& rng);

/// Removes min(amount, biomass) from the patch; deletes it if the residual is
/// under the threshold. Returns the tons removed (0 if there is no patch).
double harvest_patch(PopulationState& pop, SpeciesId sp, CellId cell, double amount);

}  // namespace pirogue
