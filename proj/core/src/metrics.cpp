#include "pirogue/metrics.hpp"

#include <algorithm>

namespace pirogue {

std::vector<double> annual_landings(const RunOutputs& out, std::optional<std::string_view> country) {
  std::vector<double> years;
  for (std::size_t i = 1; i < out.frames.size(); ++i) {
    const std::size_t y = (i - 1) / 365;
    if (years.size() <= y) years.resize(y + 1, 0.0);
    const auto& f = out.frames[i];
    for (std::size_t s = 0; s < f.landings.size(); ++s)
      if (!country || out.site_countries[s] == *country) years[y] += f.landings[s];
  }
  return years;
}

std::vector<double> total_biomass_series(const RunOutputs& out) {
  std::vector<double> series;
  series.reserve(out.frames.size());
  for (const auto& f : out.frames) {
    double sum = 0.0;
    for (const double b : f.biomass) sum += b;
    series.push_back(sum);
  }
  return series;
}

std::optional<std::int64_t> collapse_frame(const RunOutputs& out, double fraction) {
  const auto series = total_biomass_series(out);
  if (series.empty()) return std::nullopt;
  for (std::size_t i = 0; i < series.size(); ++i)
    if (series[i] < fraction * series.front()) return static_cast<std::int64_t>(i);
  return std::nullopt;
}

double mean_annual_landings(const RunOutputs& out, int first_year, int last_year,
                            std::optional<std::string_view> country) {
  const auto years = annual_landings(out, country);
  const int hi = std::min(last_year, static_cast<int>(years.size()));
  double sum = 0.0;
  int n = 0;
  for (int y = std::max(1, first_year); y <= hi; ++y) {
    sum += years[static_cast<std::size_t>(y - 1)];
    ++n;
  }
  return n == 0 ? 0.0 : sum / n;
}

}  // namespace pirogue
