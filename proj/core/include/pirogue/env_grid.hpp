#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "pirogue/calendar.hpp"
#include "pirogue/geo.hpp"

namespace pirogue {

using CellId = std::int32_t;
inline constexpr CellId kNoCell = -1;

struct Cell {
  int row = 0;
  int col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

enum class SstMode { climatology, series };

/// Raster geometry; row 0 is the southernmost row, (origin_lat, origin_lon) the center of cell (0, 0).
struct GridGeometry {
  int nrows = 0;
  int ncols = 0;
  double origin_lat = 0.0;
  double origin_lon = 0.0;
  double cell_size_deg = 0.09;
  double cell_area_km2 = 100.0;
};

/**
 * @brief Gridded marine environment: bathymetry, monthly SST layers and a
 * uniform climate offset.
 *
 * The raster data is immutable and shared, so copies are cheap and runs with
 * different offsets can share one loaded environment. Depth is in meters,
 * positive downward; land cells carry no depth and no SST.
 */
class EnvironmentGrid {
 public:
  EnvironmentGrid() = default;

  /// Validates and builds a grid. `depth` uses NaN for land.
  /// Layers are row-major over the geometry (row 0 south).
  static EnvironmentGrid from_layers(GridGeometry geometry, std::vector<double> depth,
                                     std::vector<std::vector<double>> sst_layers, SstMode mode,
                                     int series_start_year, double delta_sst);

  const GridGeometry& geometry() const { return data_->geometry; }
  int nrows() const { return data_->geometry.nrows; }
  int ncols() const { return data_->geometry.ncols; }
  std::size_t cell_count() const { return static_cast<std::size_t>(nrows()) * ncols(); }
  double cell_area_km2() const { return data_->geometry.cell_area_km2; }

  bool in_bounds(int row, int col) const { return row >= 0 && col >= 0 && row < nrows() && col < ncols(); }
  CellId id(Cell c) const { return static_cast<CellId>(c.row * ncols() + c.col); }
  Cell cell(CellId id) const { return {id / ncols(), id % ncols()}; }
  LatLon center(CellId id) const;
  /// Cell containing a position, if inside the raster.
  std::optional<CellId> cell_at(LatLon p) const;

  bool is_sea(CellId id) const { return data_->sea[static_cast<std::size_t>(id)] != 0; }
  double depth(CellId id) const { return data_->depth[static_cast<std::size_t>(id)]; }
  const std::vector<CellId>& sea_cells() const { return data_->sea_cells; }

  SstMode mode() const { return data_->mode; }
  int series_start_year() const { return data_->series_start_year; }
  std::size_t layer_count() const { return data_->sst.size(); }
  /// Layer in force at `clock` (climatology: by month; series: by year and month, cycled).
  std::size_t layer_index(const SimClock& clock) const;
  double raw_sst(std::size_t layer, CellId id) const { return data_->sst[layer][static_cast<std::size_t>(id)]; }

  double delta_sst() const { return delta_sst_; }
  EnvironmentGrid with_delta_sst(double delta) const;

 private:
  struct Data {
    GridGeometry geometry;
    std::vector<double> depth;
    std::vector<std::uint8_t> sea;
    std::vector<CellId> sea_cells;
    std::vector<std::vector<double>> sst;
    SstMode mode = SstMode::climatology;
    int series_start_year = 0;
  };
  std::shared_ptr<const Data> data_;
  double delta_sst_ = 0.0;
};

/// SST in °C at a sea cell, offset included. Throws InvariantError on a land cell.
double sst_at(const EnvironmentGrid& grid, CellId cell, const SimClock& clock);
double sst_at(const EnvironmentGrid& grid, Cell cell, const SimClock& clock);

/// Temperature and depth window of a model-species (closed intervals).
struct HabitatEnvelope {
  double t_min = 0.0;
  double t_max = 0.0;
  double depth_min = 0.0;
  double depth_max = 0.0;
};

/// Sea cells satisfying a habitat envelope at one instant.
struct HabitatMask {
  std::vector<std::uint8_t> inside;  // indexed by CellId
  std::vector<CellId> cells;         // ascending CellId

  bool contains(CellId id) const { return id >= 0 && static_cast<std::size_t>(id) < inside.size() && inside[static_cast<std::size_t>(id)] != 0; }
  bool empty() const { return cells.empty(); }
  std::size_t size() const { return cells.size(); }
};

HabitatMask habitat_mask(const EnvironmentGrid& grid, const HabitatEnvelope& envelope, const SimClock& clock);

/// Mean latitude of the mask's cell centers; nullopt for an empty mask.
std::optional<double> mask_centroid_lat(const EnvironmentGrid& grid, const HabitatMask& mask);

/**
 * Loads `bathy.asc` plus either twelve `sst_clim_MM.asc` climatology layers or
 * a contiguous `sst_YYYY_MM.asc` series from `dir`. NODATA in bathy marks land.
 * Errors name the offending file and cell.
 */
EnvironmentGrid load_environment(const std::filesystem::path& dir, double delta_sst);

/// Writes the grid in the layout `load_environment` reads (offset not applied).
void write_environment(const std::filesystem::path& dir, const EnvironmentGrid& grid);

}  // namespace pirogue
