#include "pirogue/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "csv.hpp"
#include "pirogue/errors.hpp"
#include "pirogue/outputs.hpp"

namespace pirogue {

PlotKind parse_plot_kind(std::string_view name) {
  if (name == "catch") return PlotKind::catch_;
  if (name == "biomass") return PlotKind::biomass;
  if (name == "fleet") return PlotKind::fleet;
  if (name == "migrations") return PlotKind::migrations;
  throw ValidationError("unknown plot kind '" + std::string(name) + "' (catch, biomass, fleet, migrations)");
}

namespace {

struct Series {
  std::string name;
  std::vector<double> values;  // one per date
};

struct Panel {
  std::string title;
  std::string y_label;
  std::vector<Series> series;
  bool stacked = false;
};

// Long-format CSV (date,key,value) into one series per key, in first-seen order.
struct LongTable {
  std::vector<std::string> dates;
  std::vector<Series> series;
};

LongTable read_long(const std::filesystem::path& path, std::string_view key_col, std::string_view value_col,
                    std::string_view filter_col = {}, std::string_view filter_value = {}) {
  if (!std::filesystem::exists(path)) throw ValidationError("missing CSV: " + path.string());
  const auto t = csv::read(path);
  const auto di = t.column("date");
  const auto ki = t.column(key_col);
  const auto vi = t.column(value_col);
  const auto fi = filter_col.empty() ? std::size_t{0} : t.column(filter_col);
  LongTable out;
  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (!filter_col.empty() && t.rows[r][fi] != filter_value) continue;
    const auto& date = t.rows[r][di];
    if (out.dates.empty() || out.dates.back() != date) out.dates.push_back(date);
    const auto& key = t.rows[r][ki];
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.series.size()).first;
      out.series.push_back({key, {}});
    }
    auto& values = out.series[it->second].values;
    values.resize(out.dates.size(), 0.0);
    values.back() += t.number(r, vi);
  }
  for (auto& s : out.series) s.values.resize(out.dates.size(), 0.0);
  return out;
}

const char* colour(std::size_t i) {
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
                                  "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939", "#8c6d31", "#843c39",
                                  "#7b4173", "#3182bd"};
  return palette[i % std::size(palette)];
}

std::string escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string tick_label(double v) {
  std::ostringstream s;
  if (v != 0.0 && (std::abs(v) >= 1e6 || std::abs(v) < 1e-2)) s.precision(2), s << std::scientific << v;
  else s.precision(6), s << v;
  return s.str();
}

constexpr double kWidth = 900.0;
constexpr double kPanelHeight = 360.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 190.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

void draw_panel(std::ostream& out, const Panel& p, const std::vector<std::string>& dates, double y0) {
  const std::size_t n = dates.size();
  std::vector<std::vector<double>> lines;
  std::vector<double> base(n, 0.0);
  for (const auto& s : p.series) {
    if (p.stacked) {
      for (std::size_t i = 0; i < n; ++i) base[i] += s.values[i];
      lines.push_back(base);
    } else {
      lines.push_back(s.values);
    }
  }
  double y_max = 0.0;
  double y_min = 0.0;
  for (const auto& l : lines)
    for (const double v : l) y_max = std::max(y_max, v), y_min = std::min(y_min, v);
  if (y_max == y_min) y_max = y_min + 1.0;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kPanelHeight - kTop - kBottom;
  const double top = y0 + kTop;
  const auto sx = [&](std::size_t i) { return kLeft + (n <= 1 ? plot_w / 2.0 : plot_w * static_cast<double>(i) / static_cast<double>(n - 1)); };
  const auto sy = [&](double v) { return top + plot_h * (1.0 - (v - y_min) / (y_max - y_min)); };

  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << y0 + 24 << "\" text-anchor=\"middle\" font-size=\"16\">"
      << escape(p.title) << "</text>\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = y_min + (y_max - y_min) * k / 4.0;
    out << "<line x1=\"" << kLeft - 4 << "\" x2=\"" << kLeft << "\" y1=\"" << sy(v) << "\" y2=\"" << sy(v)
        << "\" stroke=\"#333\"/><text x=\"" << kLeft - 6 << "\" y=\"" << sy(v) + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << tick_label(v) << "</text>\n";
  }
  out << "<text x=\"16\" y=\"" << top + plot_h / 2 << "\" font-size=\"12\" transform=\"rotate(-90 16 " << top + plot_h / 2
      << ")\" text-anchor=\"middle\">" << escape(p.y_label) << "</text>\n";
  if (n > 0) {
    const std::size_t ticks = std::min<std::size_t>(n, 5);
    for (std::size_t k = 0; k < ticks; ++k) {
      const std::size_t i = ticks == 1 ? 0 : k * (n - 1) / (ticks - 1);
      out << "<text x=\"" << sx(i) << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\" font-size=\"11\">"
          << escape(dates[i]) << "</text>\n";
    }
  }
  // Stacked layers are drawn top first so lower layers stay visible.
  for (std::size_t j = lines.size(); j-- > 0;) {
    const auto& l = lines[j];
    if (n == 1) {
      out << "<circle cx=\"" << sx(0) << "\" cy=\"" << sy(l[0]) << "\" r=\"4\" fill=\"" << colour(j) << "\"/>\n";
      continue;
    }
    out << (p.stacked ? "<polygon fill-opacity=\"0.85\" fill=\"" : "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"")
        << colour(j) << "\" points=\"";
    for (std::size_t i = 0; i < n; ++i) out << sx(i) << ',' << sy(l[i]) << ' ';
    if (p.stacked) out << sx(n - 1) << ',' << sy(y_min) << ' ' << sx(0) << ',' << sy(y_min);
    out << "\"/>\n";
  }
  for (std::size_t j = 0; j < p.series.size(); ++j) {
    const double ly = top + 14.0 * static_cast<double>(j) + 6;
    out << "<rect x=\"" << kWidth - kRight + 12 << "\" y=\"" << ly - 8 << "\" width=\"10\" height=\"10\" fill=\""
        << colour(j) << "\"/><text x=\"" << kWidth - kRight + 28 << "\" y=\"" << ly + 1 << "\" font-size=\"11\">"
        << escape(p.series[j].name) << "</text>\n";
  }
}

std::filesystem::path write_svg(const std::filesystem::path& path, const std::vector<std::string>& dates,
                                const std::vector<Panel>& panels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  const double height = kPanelHeight * static_cast<double>(panels.size());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << kWidth << ' ' << height << "\" font-family=\"sans-serif\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < panels.size(); ++i) draw_panel(out, panels[i], dates, kPanelHeight * static_cast<double>(i));
  out << "</svg>\n";
  return path;
}

}  // namespace

std::vector<std::filesystem::path> plot(const std::filesystem::path& dir, PlotKind kind) {
  switch (kind) {
    case PlotKind::catch_: {
      const auto sites = read_long(dir / "landings_daily.csv", "site", "tons");
      const auto countries = read_long(dir / "catch_country_daily.csv", "country", "tons");
      return {write_svg(dir / "catch.svg", sites.dates,
                        {{"Daily landings per site", "tons/day", sites.series, true},
                         {"Cumulative catch per country", "tons", countries.series, false}})};
    }
    case PlotKind::biomass: {
      const auto t = read_long(dir / "biomass_daily.csv", "species", "tons");
      return {write_svg(dir / "biomass.svg", t.dates, {{"Biomass per species", "tons", t.series, false}})};
    }
    case PlotKind::fleet: {
      const auto t = read_long(dir / "fleet_daily.csv", "site", "count");
      return {write_svg(dir / "fleet.svg", t.dates, {{"Fishing units at each site", "units", t.series, true}})};
    }
    case PlotKind::migrations: {
      // Cumulative counts per kind, aligned on the dates of the biomass file.
      const auto frames = read_long(dir / "biomass_daily.csv", "species", "tons");
      const auto path = dir / "migrations.csv";
      if (!std::filesystem::exists(path)) throw ValidationError("missing CSV: " + path.string());
      const auto t = csv::read(path);
      csv::expect_header(t, {"date", "fu_id", "kind", "from", "to"});
      std::vector<Series> series = {{"short", std::vector<double>(frames.dates.size(), 0.0)},
                                    {"long", std::vector<double>(frames.dates.size(), 0.0)}};
      for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& date = t.rows[r][0];
        auto& s = series[t.rows[r][2] == "long" ? 1 : 0].values;
        // An event on day D is counted in the snapshot that closes day D.
        const auto it = std::upper_bound(frames.dates.begin(), frames.dates.end(), date);
        for (auto i = static_cast<std::size_t>(it - frames.dates.begin()); i < s.size(); ++i) s[i] += 1.0;
      }
      return {write_svg(dir / "migrations.svg", frames.dates,
                        {{"Cumulative migrations", "count", series, false}})};
    }
  }
  return {};
}

}  // namespace pirogue
