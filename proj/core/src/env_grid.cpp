#include "pirogue/env_grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <regex>
#include <sstream>

#include "pirogue/ascii_grid.hpp"
#include "pirogue/errors.hpp"

namespace pirogue {

namespace {

constexpr double kSstLow = 10.0;
constexpr double kSstHigh = 40.0;
constexpr double kNoData = -9999.0;

std::string cell_label(const GridGeometry& g, std::size_t idx) {
  return "cell (row " + std::to_string(idx / static_cast<std::size_t>(g.ncols)) + ", col " +
         std::to_string(idx % static_cast<std::size_t>(g.ncols)) + ")";
}

// File rows run north to south; grid rows south to north.
std::size_t file_to_grid(const AsciiGrid& a, std::size_t k) {
  const std::size_t fr = k / static_cast<std::size_t>(a.ncols);
  const std::size_t c = k % static_cast<std::size_t>(a.ncols);
  return (static_cast<std::size_t>(a.nrows) - 1 - fr) * static_cast<std::size_t>(a.ncols) + c;
}

}  // namespace

EnvironmentGrid EnvironmentGrid::from_layers(GridGeometry geometry, std::vector<double> depth,
                                             std::vector<std::vector<double>> sst_layers, SstMode mode,
                                             int series_start_year, double delta_sst) {
  if (geometry.nrows <= 0 || geometry.ncols <= 0) throw ValidationError("grid must have positive dimensions");
  if (!(geometry.cell_size_deg > 0.0)) throw ValidationError("cell size must be positive");
  const std::size_t n = static_cast<std::size_t>(geometry.nrows) * static_cast<std::size_t>(geometry.ncols);
  if (depth.size() != n) throw ValidationError("bathymetry size does not match grid dimensions");
  if (sst_layers.empty()) throw ValidationError("no SST layers");
  if (mode == SstMode::climatology && sst_layers.size() != 12)
    throw ValidationError("climatology needs 12 monthly SST layers, got " + std::to_string(sst_layers.size()));
  if (mode == SstMode::series && sst_layers.size() % 12 != 0)
    throw ValidationError("SST series length must be a whole number of years");
  if (!std::isfinite(delta_sst)) throw ValidationError("delta_sst must be finite");

  auto data = std::make_shared<Data>();
  data->geometry = geometry;
  data->sea.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(depth[i])) continue;
    if (!std::isfinite(depth[i]) || depth[i] <= 0.0)
      throw ValidationError("bathymetry: non-positive or non-finite depth at sea " + cell_label(geometry, i));
    data->sea[i] = 1;
    data->sea_cells.push_back(static_cast<CellId>(i));
  }
  for (std::size_t l = 0; l < sst_layers.size(); ++l) {
    if (sst_layers[l].size() != n) throw ValidationError("SST layer " + std::to_string(l) + " size mismatch");
    for (const CellId id : data->sea_cells) {
      const double v = sst_layers[l][static_cast<std::size_t>(id)];
      if (!std::isfinite(v))
        throw ValidationError("SST layer " + std::to_string(l) + ": non-finite value at sea " +
                              cell_label(geometry, static_cast<std::size_t>(id)));
      if (v + delta_sst < kSstLow || v + delta_sst > kSstHigh)
        throw ValidationError("SST layer " + std::to_string(l) + ": implausible temperature " + std::to_string(v + delta_sst) +
                              " at sea " + cell_label(geometry, static_cast<std::size_t>(id)));
    }
  }
  data->depth = std::move(depth);
  data->sst = std::move(sst_layers);
  data->mode = mode;
  data->series_start_year = series_start_year;

  EnvironmentGrid g;
  g.data_ = std::move(data);
  g.delta_sst_ = delta_sst;
  return g;
}

LatLon EnvironmentGrid::center(CellId id) const {
  const auto& g = data_->geometry;
  const Cell c = cell(id);
  return {g.origin_lat + c.row * g.cell_size_deg, g.origin_lon + c.col * g.cell_size_deg};
}

std::optional<CellId> EnvironmentGrid::cell_at(LatLon p) const {
  const auto& g = data_->geometry;
  const double r = std::floor((p.lat - g.origin_lat) / g.cell_size_deg + 0.5);
  const double c = std::floor((p.lon - g.origin_lon) / g.cell_size_deg + 0.5);
  if (r < 0 || c < 0 || r >= g.nrows || c >= g.ncols) return std::nullopt;
  return id({static_cast<int>(r), static_cast<int>(c)});
}

std::size_t EnvironmentGrid::layer_index(const SimClock& clock) const {
  if (data_->mode == SstMode::climatology) return static_cast<std::size_t>(clock.month - 1);
  const auto n = static_cast<long long>(data_->sst.size());
  long long k = static_cast<long long>(clock.year - data_->series_start_year) * 12 + (clock.month - 1);
  k %= n;
  if (k < 0) k += n;
  return static_cast<std::size_t>(k);
}

EnvironmentGrid EnvironmentGrid::with_delta_sst(double delta) const {
  if (!std::isfinite(delta)) throw ValidationError("delta_sst must be finite");
  for (const auto& layer : data_->sst)
    for (const CellId id : data_->sea_cells) {
      const double v = layer[static_cast<std::size_t>(id)] + delta;
      if (v < kSstLow || v > kSstHigh)
        throw ValidationError("delta_sst " + std::to_string(delta) + " drives SST out of [10, 40] at " +
                              cell_label(data_->geometry, static_cast<std::size_t>(id)));
    }
  EnvironmentGrid g = *this;
  g.delta_sst_ = delta;
  return g;
}

double sst_at(const EnvironmentGrid& grid, CellId cell, const SimClock& clock) {
  if (cell < 0 || static_cast<std::size_t>(cell) >= grid.cell_count() || !grid.is_sea(cell))
    throw InvariantError("sst_at queried on a land or out-of-range cell " + std::to_string(cell));
  return grid.raw_sst(grid.layer_index(clock), cell) + grid.delta_sst();
}

double sst_at(const EnvironmentGrid& grid, Cell cell, const SimClock& clock) {
  if (!grid.in_bounds(cell.row, cell.col)) throw InvariantError("sst_at: cell out of bounds");
  return sst_at(grid, grid.id(cell), clock);
}

HabitatMask habitat_mask(const EnvironmentGrid& grid, const HabitatEnvelope& env, const SimClock& clock) {
  HabitatMask mask;
  mask.inside.assign(grid.cell_count(), 0);
  const std::size_t layer = grid.layer_index(clock);
  // The offset moves the thresholds rather than the data, so that a warmer
  // grid and a colder envelope give bit-identical masks.
  const double t_lo = env.t_min - grid.delta_sst();
  const double t_hi = env.t_max - grid.delta_sst();
  for (const CellId id : grid.sea_cells()) {
    const double t = grid.raw_sst(layer, id);
    const double d = grid.depth(id);
    if (t >= t_lo && t <= t_hi && d >= env.depth_min && d <= env.depth_max) {
      mask.inside[static_cast<std::size_t>(id)] = 1;
      mask.cells.push_back(id);
    }
  }
  return mask;
}

std::optional<double> mask_centroid_lat(const EnvironmentGrid& grid, const HabitatMask& mask) {
  if (mask.empty()) return std::nullopt;
  double sum = 0.0;
  for (const CellId id : mask.cells) sum += grid.center(id).lat;
  return sum / static_cast<double>(mask.cells.size());
}

EnvironmentGrid load_environment(const std::filesystem::path& dir, double delta_sst) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ValidationError("environment directory not found: " + dir.string());
  const fs::path bathy_path = dir / "bathy.asc";
  if (!fs::exists(bathy_path)) throw ValidationError("missing file: " + bathy_path.string());
  const AsciiGrid bathy = read_ascii_grid(bathy_path);

  GridGeometry geom;
  geom.nrows = bathy.nrows;
  geom.ncols = bathy.ncols;
  geom.cell_size_deg = bathy.cellsize;
  geom.origin_lat = bathy.yllcorner + bathy.cellsize / 2.0;
  geom.origin_lon = bathy.xllcorner + bathy.cellsize / 2.0;

  const std::size_t n = bathy.values.size();
  std::vector<double> depth(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double v = bathy.values[k];
    const std::size_t gi = file_to_grid(bathy, k);
    if (bathy.is_nodata(v)) {
      depth[gi] = std::numeric_limits<double>::quiet_NaN();
    } else {
      if (!std::isfinite(v) || v <= 0.0)
        throw ValidationError(bathy_path.string() + ": non-positive depth " + std::to_string(v) + " at sea " +
                              cell_label(geom, gi));
      depth[gi] = v;
    }
  }

  // Discover SST layers.
  std::vector<fs::path> files;
  SstMode mode = SstMode::climatology;
  int start_year = 0;
  bool have_clim = fs::exists(dir / "sst_clim_01.asc");
  if (have_clim) {
    for (int m = 1; m <= 12; ++m) {
      char name[32];
      std::snprintf(name, sizeof name, "sst_clim_%02d.asc", m);
      const fs::path p = dir / name;
      if (!fs::exists(p)) throw ValidationError("missing file: " + p.string());
      files.push_back(p);
    }
  } else {
    static const std::regex pattern(R"(sst_(\d{4})_(\d{2})\.asc)");
    std::map<int, fs::path> series;  // key: year*12 + month-1
    for (const auto& entry : fs::directory_iterator(dir)) {
      std::smatch m;
      const std::string fname = entry.path().filename().string();
      if (std::regex_match(fname, m, pattern)) {
        const int y = std::stoi(m[1].str());
        const int mo = std::stoi(m[2].str());
        if (mo < 1 || mo > 12) throw ValidationError("bad month in " + entry.path().string());
        series[y * 12 + mo - 1] = entry.path();
      }
    }
    if (series.empty())
      throw ValidationError("missing file: " + (dir / "sst_clim_01.asc").string() + " (or an sst_YYYY_MM.asc series)");
    mode = SstMode::series;
    const int first = series.begin()->first;
    if (first % 12 != 0) throw ValidationError("SST series must start in January: " + series.begin()->second.string());
    start_year = first / 12;
    int expect = first;
    for (const auto& [key, p] : series) {
      if (key != expect) throw ValidationError("SST series has a gap before " + p.string());
      files.push_back(p);
      ++expect;
    }
    if (files.size() % 12 != 0) throw ValidationError("SST series must cover whole years (" + dir.string() + ")");
  }

  std::vector<std::vector<double>> layers;
  layers.reserve(files.size());
  for (const fs::path& p : files) {
    const AsciiGrid a = read_ascii_grid(p);
    if (!a.same_shape(bathy)) {
      std::ostringstream msg;
      msg << "raster header mismatch between " << bathy_path.string() << " (" << bathy.ncols << "x" << bathy.nrows
          << ") and " << p.string() << " (" << a.ncols << "x" << a.nrows << ")";
      throw ValidationError(msg.str());
    }
    std::vector<double> layer(n, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t gi = file_to_grid(a, k);
      if (std::isnan(depth[gi])) continue;
      const double v = a.values[k];
      if (a.is_nodata(v) || !std::isfinite(v))
        throw ValidationError(p.string() + ": missing or non-finite SST at sea " + cell_label(geom, gi));
      layer[gi] = v;
    }
    layers.push_back(std::move(layer));
  }
  try {
    return EnvironmentGrid::from_layers(geom, std::move(depth), std::move(layers), mode, start_year, delta_sst);
  } catch (const ValidationError& e) {
    throw ValidationError(dir.string() + ": " + e.what());
  }
}

void write_environment(const std::filesystem::path& dir, const EnvironmentGrid& grid) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const auto& g = grid.geometry();
  AsciiGrid a;
  a.ncols = g.ncols;
  a.nrows = g.nrows;
  a.cellsize = g.cell_size_deg;
  a.xllcorner = g.origin_lon - g.cell_size_deg / 2.0;
  a.yllcorner = g.origin_lat - g.cell_size_deg / 2.0;
  a.nodata = kNoData;
  const std::size_t n = grid.cell_count();
  a.values.assign(n, kNoData);
  auto fill = [&](auto value_of) {
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t gi = file_to_grid(a, k);
      a.values[k] = grid.is_sea(static_cast<CellId>(gi)) ? value_of(static_cast<CellId>(gi)) : kNoData;
    }
  };
  fill([&](CellId id) { return grid.depth(id); });
  write_ascii_grid(dir / "bathy.asc", a, 1);
  for (std::size_t l = 0; l < grid.layer_count(); ++l) {
    fill([&](CellId id) { return grid.raw_sst(l, id); });
    char name[40];
    if (grid.mode() == SstMode::climatology) {
      std::snprintf(name, sizeof name, "sst_clim_%02zu.asc", l + 1);
    } else {
      std::snprintf(name, sizeof name, "sst_%04d_%02zu.asc", grid.series_start_year() + static_cast<int>(l / 12), l % 12 + 1);
    }
    write_ascii_grid(dir / name, a, 3);
  }
}

}  // namespace pirogue
