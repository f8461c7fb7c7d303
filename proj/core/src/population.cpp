#include "pirogue/population.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pirogue/errors.hpp"

namespace pirogue {

PopulationState::PopulationState(std::size_t species_count, std::size_t cell_count)
    : species_(species_count), cell_count_(cell_count) {
  for (auto& s : species_) s.slot_of_cell.assign(cell_count, -1);
}

const FishPatch* PopulationState::patch_at(SpeciesId sp, CellId cell) const {
  const auto& s = species_.at(static_cast<std::size_t>(sp));
  if (cell < 0 || static_cast<std::size_t>(cell) >= cell_count_) return nullptr;
  const auto slot = s.slot_of_cell[static_cast<std::size_t>(cell)];
  return slot < 0 ? nullptr : &s.patches[static_cast<std::size_t>(slot)];
}

double PopulationState::total_biomass(SpeciesId sp) const {
  double sum = 0.0;
  for (const auto& p : patches(sp)) sum += p.biomass;
  return sum;
}

void PopulationState::add_patch(SpeciesId sp, CellId cell, double biomass) {
  auto& s = species_.at(static_cast<std::size_t>(sp));
  if (cell < 0 || static_cast<std::size_t>(cell) >= cell_count_) throw InvariantError("patch cell out of range");
  auto& slot = s.slot_of_cell[static_cast<std::size_t>(cell)];
  if (slot >= 0) throw InvariantError("two patches of one species in cell " + std::to_string(cell));
  if (!(biomass >= 0.0)) throw InvariantError("negative patch biomass");
  slot = static_cast<std::int32_t>(s.patches.size());
  s.patches.push_back({sp, cell, biomass});
}

double PopulationState::remove_patch(SpeciesId sp, CellId cell) {
  auto& s = species_.at(static_cast<std::size_t>(sp));
  const auto slot = s.slot_of_cell.at(static_cast<std::size_t>(cell));
  if (slot < 0) throw InvariantError("no patch to remove in cell " + std::to_string(cell));
  const double biomass = s.patches[static_cast<std::size_t>(slot)].biomass;
  const auto last = static_cast<std::int32_t>(s.patches.size()) - 1;
  if (slot != last) {
    s.patches[static_cast<std::size_t>(slot)] = s.patches.back();
    s.slot_of_cell[static_cast<std::size_t>(s.patches[static_cast<std::size_t>(slot)].cell)] = slot;
  }
  s.patches.pop_back();
  s.slot_of_cell[static_cast<std::size_t>(cell)] = -1;
  return biomass;
}

void PopulationState::move_patch(SpeciesId sp, CellId from, CellId to) {
  if (from == to) return;
  auto& s = species_.at(static_cast<std::size_t>(sp));
  const auto slot = s.slot_of_cell.at(static_cast<std::size_t>(from));
  if (slot < 0) throw InvariantError("no patch to move in cell " + std::to_string(from));
  auto& dest = s.slot_of_cell.at(static_cast<std::size_t>(to));
  if (dest >= 0) throw InvariantError("two patches of one species in cell " + std::to_string(to));
  dest = slot;
  s.slot_of_cell[static_cast<std::size_t>(from)] = -1;
  s.patches[static_cast<std::size_t>(slot)].cell = to;
}

void PopulationState::set_biomass(SpeciesId sp, CellId cell, double biomass) {
  auto& s = species_.at(static_cast<std::size_t>(sp));
  const auto slot = s.slot_of_cell.at(static_cast<std::size_t>(cell));
  if (slot < 0) throw InvariantError("no patch in cell " + std::to_string(cell));
  if (!(biomass >= 0.0)) throw InvariantError("negative patch biomass");
  s.patches[static_cast<std::size_t>(slot)].biomass = biomass;
}

double logistic_growth(double biomass, double carrying_capacity, double growth_rate, int events_per_year) {
  return growth_rate / events_per_year * biomass * (1.0 - biomass / carrying_capacity);
}

namespace {

std::vector<CellId> free_cells(const PopulationState& pop, SpeciesId sp, const HabitatMask& mask) {
  std::vector<CellId> out;
  out.reserve(mask.cells.size());
  for (const CellId c : mask.cells)
    if (!pop.occupied(sp, c)) out.push_back(c);
  return out;
}

// Splits `amount` into full patches plus a remainder patch (if it reaches the
// threshold) and places them in random free habitat cells. Returns what was placed.
ReproductionResult place_biomass(PopulationState& pop, SpeciesId sp, double amount, double capacity,
                                 const HabitatMask& mask, Rng& rng) {
  ReproductionResult res;
  const auto full = static_cast<std::size_t>(std::floor(amount / capacity));
  const double remainder = amount - static_cast<double>(full) * capacity;
  const bool has_remainder = remainder >= kPatchDeletionThreshold;
  auto cells = free_cells(pop, sp, mask);
  const std::size_t wanted = full + (has_remainder ? 1 : 0);
  const std::size_t k = std::min(wanted, cells.size());
  rng.partial_shuffle(std::span<CellId>(cells), k);
  double placed = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double b = i < full ? capacity : remainder;
    pop.add_patch(sp, cells[i], b);
    placed += b;
    if (i < full)
      ++res.full_patches;
    else
      res.remainder_placed = b;
  }
  res.dropped = std::max(0.0, amount - placed);
  return res;
}

}  // namespace

PopulationState init_populations(std::span<const SpeciesParams> species, const EnvironmentGrid& grid,
                                 std::span<const HabitatMask> masks, Rng& rng) {
  if (masks.size() != species.size()) throw InvariantError("one habitat mask per species required");
  PopulationState pop(species.size(), grid.cell_count());
  for (std::size_t i = 0; i < species.size(); ++i) {
    const auto& sp = species[i];
    validate_species(sp, grid.cell_area_km2());
    if (masks[i].empty()) throw ValidationError("species '" + sp.name + "' has no habitat at the start date");
    const auto sid = static_cast<SpeciesId>(i);
    const auto res = place_biomass(pop, sid, sp.initial_biomass, sp.patch_capacity(grid.cell_area_km2()), masks[i], rng);
    auto& ledger = pop.ledger(sid);
    ledger.initial = sp.initial_biomass;
    ledger.senescence += res.dropped;
  }
  return pop;
}

PopulationState init_populations(std::span<const SpeciesParams> species, const EnvironmentGrid& grid,
                                 const SimClock& clock, Rng& rng) {
  std::vector<HabitatMask> masks;
  for (const auto& sp : species) masks.push_back(habitat_mask(grid, sp.envelope(), clock));
  return init_populations(species, grid, masks, rng);
}

ReproductionResult reproduce(PopulationState& pop, const SpeciesParams& sp, int events_per_year,
                             const EnvironmentGrid& grid, const HabitatMask& mask, Rng& rng) {
  const double g = logistic_growth(pop.total_biomass(sp.id), sp.carrying_capacity, sp.growth_rate, events_per_year);
  if (!(g > 0.0)) return {};
  auto res = place_biomass(pop, sp.id, g, sp.patch_capacity(grid.cell_area_km2()), mask, rng);
  res.growth = g;
  auto& ledger = pop.ledger(sp.id);
  ledger.growth += g - res.dropped;
  ledger.unplaced_growth += res.dropped;
  return res;
}

ReproductionResult reproduce(PopulationState& pop, const SpeciesParams& sp, int events_per_year,
                             const EnvironmentGrid& grid, const SimClock& clock, Rng& rng) {
  return reproduce(pop, sp, events_per_year, grid, habitat_mask(grid, sp.envelope(), clock), rng);
}

namespace {

CellId nearest_free(const PopulationState& pop, SpeciesId sp, const EnvironmentGrid& grid, const HabitatMask& mask,
                    CellId from) {
  const LatLon origin = grid.center(from);
  CellId best = kNoCell;
  double best_km = std::numeric_limits<double>::infinity();
  for (const CellId c : mask.cells) {
    if (pop.occupied(sp, c)) continue;
    const double d = distance_km(origin, grid.center(c));
    if (d < best_km - 1e-9) {
      best_km = d;
      best = c;
    }
  }
  return best;
}

void move_pelagic(PopulationState& pop, const SpeciesParams& sp, const EnvironmentGrid& grid, const HabitatMask& mask,
                  Rng& rng) {
  const std::size_t n = pop.patches(sp.id).size();
  CellId options[8];
  for (std::size_t i = 0; i < n; ++i) {
    const CellId here = pop.patches(sp.id)[i].cell;
    if (!mask.contains(here)) {
      const CellId to = nearest_free(pop, sp.id, grid, mask, here);
      if (to != kNoCell) pop.move_patch(sp.id, here, to);
      continue;
    }
    const Cell c = grid.cell(here);
    int count = 0;
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        if (!grid.in_bounds(c.row + dr, c.col + dc)) continue;
        const CellId id = grid.id({c.row + dr, c.col + dc});
        if (mask.contains(id) && !pop.occupied(sp.id, id)) options[count++] = id;
      }
    }
    if (count == 0) continue;
    pop.move_patch(sp.id, here, options[rng.below(static_cast<std::uint64_t>(count))]);
  }
}

void move_demersal(PopulationState& pop, const SpeciesParams& sp, const HabitatMask& mask, Rng& rng) {
  const std::size_t n = pop.patches(sp.id).size();
  std::vector<CellId> options;
  options.reserve(mask.cells.size());
  for (std::size_t i = 0; i < n; ++i) {
    const CellId here = pop.patches(sp.id)[i].cell;
    options.clear();
    for (const CellId c : mask.cells)
      if (c == here || !pop.occupied(sp.id, c)) options.push_back(c);
    if (options.empty()) continue;
    pop.move_patch(sp.id, here, options[rng.below(options.size())]);
  }
}

}  // namespace

void move_patches(PopulationState& pop, const SpeciesParams& sp, const EnvironmentGrid& grid, const HabitatMask& mask,
                  Rng& rng) {
  if (sp.stratum == Stratum::pelagic)
    move_pelagic(pop, sp, grid, mask, rng);
  else
    move_demersal(pop, sp, mask, rng);
}

void move_patches(PopulationState& pop, const SpeciesParams& sp, const EnvironmentGrid& grid, const SimClock& clock,
                  Rng& rng) {
  move_patches(pop, sp, grid, habitat_mask(grid, sp.envelope(), clock), rng);
}

double harvest_patch(PopulationState& pop, SpeciesId sp, CellId cell, double amount) {
  if (!(amount >= 0.0)) throw InvariantError("negative harvest");
  const FishPatch* p = pop.patch_at(sp, cell);
  if (p == nullptr) return 0.0;
  const double take = std::min(amount, p->biomass);
  const double left = p->biomass - take;
  auto& ledger = pop.ledger(sp);
  ledger.harvested += take;
  if (left < kPatchDeletionThreshold) {
    pop.remove_patch(sp, cell);
    ledger.senescence += left;
  } else {
    pop.set_biomass(sp, cell, left);
  }
  return take;
}

}  // namespace pirogue
