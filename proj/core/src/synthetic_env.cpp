#include "pirogue/synthetic_env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>

#include "pirogue/errors.hpp"

namespace pirogue {

namespace {

struct Knot {
  double x;
  double y;
};

double interpolate(std::span<const Knot> knots, double x) {
  if (x <= knots.front().x) return knots.front().y;
  if (x >= knots.back().x) return knots.back().y;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (x <= knots[i].x) {
      const double t = (x - knots[i - 1].x) / (knots[i].x - knots[i - 1].x);
      return knots[i - 1].y + t * (knots[i].y - knots[i - 1].y);
    }
  }
  return knots.back().y;
}

// Seasonal shape: +1 in September (warm season), -1 in March (upwelling season).
double season(int month) { return std::cos(2.0 * std::numbers::pi * (month - 9) / 12.0); }

constexpr double kKmPerDegLat = 111.32;

// Coast longitude by latitude, through the default landing sites.
constexpr Knot kCoast[] = {
    {8.0, -13.0},   {9.51, -13.71},  {11.80, -15.58}, {12.38, -16.74}, {12.92, -16.75},
    {13.15, -16.78}, {13.36, -16.80}, {14.17, -16.85}, {14.41, -16.97}, {14.76, -17.48},
    {14.92, -17.12}, {15.25, -16.85}, {16.02, -16.51}, {18.10, -16.02}, {18.82, -16.16},
    {21.00, -17.00}, {23.50, -16.00}, {27.00, -14.30},
};
// Width of the 0-100 m shelf, km.
constexpr Knot kShelfWidth[] = {
    {8.0, 150.0},  {11.8, 140.0}, {13.0, 80.0},  {14.5, 30.0}, {14.76, 20.0}, {15.2, 35.0},
    {16.5, 50.0},  {18.5, 60.0},  {20.0, 110.0}, {21.0, 100.0}, {23.0, 70.0},  {27.0, 60.0},
};
// Annual-mean SST, °C; strictly decreasing northward.
constexpr Knot kSstBase[] = {
    {8.0, 28.6}, {12.0, 27.0}, {15.0, 24.6}, {18.0, 22.6}, {21.0, 20.8}, {27.0, 18.8},
};
// Half-range of the seasonal cycle, °C. Its latitude slope stays below the
// mean's on every segment so each month is strictly decreasing northward.
constexpr Knot kSstAmplitude[] = {
    {8.0, 0.9}, {12.0, 2.3}, {15.0, 3.8}, {18.0, 2.6}, {21.0, 1.4}, {27.0, 1.0},
};

double depth_profile(double offshore_km, double shelf_km) {
  if (offshore_km <= shelf_km) return 5.0 + 95.0 * offshore_km / shelf_km;
  const double slope_km = offshore_km - shelf_km;
  if (slope_km <= 30.0) return 100.0 + 200.0 * slope_km / 30.0;
  return std::min(3000.0, 300.0 + 60.0 * (slope_km - 30.0));
}

EnvironmentGrid build(const GridGeometry& g, auto coast_lon, auto shelf_km, auto sst_base, auto sst_amp,
                      double delta_sst) {
  const std::size_t n = static_cast<std::size_t>(g.nrows) * static_cast<std::size_t>(g.ncols);
  std::vector<double> depth(n, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::vector<double>> layers(12, std::vector<double>(n, std::numeric_limits<double>::quiet_NaN()));
  for (int r = 0; r < g.nrows; ++r) {
    const double lat = g.origin_lat + r * g.cell_size_deg;
    const double coast = coast_lon(lat);
    const double km_per_deg_lon = kKmPerDegLat * std::cos(lat * std::numbers::pi / 180.0);
    for (int c = 0; c < g.ncols; ++c) {
      const double lon = g.origin_lon + c * g.cell_size_deg;
      if (lon >= coast) continue;
      const std::size_t i = static_cast<std::size_t>(r) * static_cast<std::size_t>(g.ncols) + static_cast<std::size_t>(c);
      depth[i] = depth_profile((coast - lon) * km_per_deg_lon, shelf_km(lat));
      for (int m = 1; m <= 12; ++m) layers[static_cast<std::size_t>(m - 1)][i] = sst_base(lat) + sst_amp(lat) * season(m);
    }
  }
  return EnvironmentGrid::from_layers(g, std::move(depth), std::move(layers), SstMode::climatology, 0, delta_sst);
}

}  // namespace

SyntheticPreset parse_synthetic_preset(std::string_view name) {
  if (name == "desk") return SyntheticPreset::desk;
  if (name == "fullscale" || name == "fullscale-synthetic") return SyntheticPreset::fullscale;
  throw ValidationError("unknown environment preset '" + std::string(name) + "' (desk, fullscale-synthetic)");
}

EnvironmentGrid make_synthetic_environment(SyntheticPreset preset, double delta_sst) {
  GridGeometry g;
  g.cell_size_deg = 0.09;
  g.cell_area_km2 = 100.0;
  if (preset == SyntheticPreset::fullscale) {
    g.origin_lat = 8.5 + g.cell_size_deg / 2.0;
    g.origin_lon = -20.0 + g.cell_size_deg / 2.0;
    g.nrows = 200;  // 8.5-26.5°N
    g.ncols = 78;   // 20-13°W
    return build(
        g, [](double lat) { return interpolate(kCoast, lat); },
        [](double lat) { return interpolate(kShelfWidth, lat); },
        [](double lat) { return interpolate(kSstBase, lat); },
        [](double lat) { return interpolate(kSstAmplitude, lat); }, delta_sst);
  }
  // Desk world: 30 x 24 cells around 13.0-15.7°N with a straight coast at 16.75°W.
  g.origin_lat = 13.0 + g.cell_size_deg / 2.0;
  g.origin_lon = -18.46 + g.cell_size_deg / 2.0;
  g.nrows = 30;
  g.ncols = 24;
  return build(
      g, [](double) { return -16.75; }, [](double) { return 45.0; },
      [](double lat) { return 28.0 - 2.2 * (lat - 13.0); }, [](double) { return 2.0; }, delta_sst);
}

}  // namespace pirogue
