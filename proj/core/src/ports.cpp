#include "pirogue/ports.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "csv.hpp"
#include "pirogue/errors.hpp"
#include "pirogue/outputs.hpp"

namespace pirogue {

void record_landing(LandingSite& site, double tons) {
  if (!(tons >= 0.0)) throw InvariantError("negative landing at " + site.name);
  site.landed_today += tons;
}

void reset_daily(std::span<LandingSite> sites) {
  for (auto& s : sites) {
    s.daily_landings.push_back(s.landed_today);
    s.landed_today = 0.0;
  }
}

std::optional<SiteId> find_site(std::span<const LandingSite> sites, std::string_view name) {
  for (std::size_t i = 0; i < sites.size(); ++i)
    if (sites[i].name == name) return static_cast<SiteId>(i);
  return std::nullopt;
}

std::vector<LandingSite> default_sites() {
  const auto site = [](const char* name, double lat, double lon, const char* country, double cap) {
    LandingSite s;
    s.name = name;
    s.position = {lat, lon};
    s.country = country;
    s.capacity = cap;
    return s;
  };
  return {
      site("Nouadhibou", 21.00, -17.00, "Mauritania", 15400),
      site("Tiouilit", 18.82, -16.16, "Mauritania", 700),
      site("Nouakchott", 18.10, -16.02, "Mauritania", 9400),
      site("Saint-Louis", 16.02, -16.51, "Senegal", 450),
      site("Fass Boye", 15.25, -16.85, "Senegal", 100),
      site("Kayar", 14.92, -17.12, "Senegal", 450),
      site("Dakar", 14.76, -17.48, "Senegal", 750),
      site("Mbour", 14.41, -16.97, "Senegal", 750),
      site("Joal", 14.17, -16.85, "Senegal", 400),
      site("Tanji", 13.36, -16.80, "Gambia", 350),
      site("Gunjur", 13.15, -16.78, "Gambia", 650),
      site("Kafountine", 12.92, -16.75, "Senegal", 350),
      site("Cap Skiring", 12.38, -16.74, "Senegal", 30),
      site("Bissau", 11.80, -15.58, "Guinee Bissau", 10),
      site("Conakry", 9.51, -13.71, "Guinea", 10),
  };
}

std::vector<LandingSite> homogeneous_sites(double scale) {
  auto sites = default_sites();
  double total = 0.0;
  for (const auto& s : sites) total += s.capacity;
  for (auto& s : sites) s.capacity = scale * total / static_cast<double>(sites.size());
  return sites;
}

namespace {
const std::vector<std::string> kHeader = {"name", "lat", "lon", "country", "capacity_tons_per_day"};
}

std::vector<LandingSite> load_sites(const std::filesystem::path& path) {
  const auto t = csv::read(path);
  csv::expect_header(t, kHeader);
  std::vector<LandingSite> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    LandingSite s;
    s.name = t.rows[i][0];
    if (s.name.empty()) t.fail(i, "empty site name");
    s.position = {t.number(i, 1), t.number(i, 2)};
    s.country = t.rows[i][3];
    s.capacity = t.number(i, 4);
    if (std::abs(s.position.lat) > 90.0 || std::abs(s.position.lon) > 180.0) t.fail(i, "coordinates out of range");
    if (s.country.empty()) t.fail(i, "empty country");
    if (s.capacity < 0.0) t.fail(i, "negative capacity");
    if (find_site(out, s.name)) t.fail(i, "duplicate site '" + s.name + "'");
    out.push_back(std::move(s));
  }
  if (out.empty()) throw ValidationError(path.string() + ": no landing sites");
  return out;
}

void write_sites(const std::filesystem::path& path, std::span<const LandingSite> sites) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << "name,lat,lon,country,capacity_tons_per_day\n";
  for (const auto& s : sites)
    out << s.name << ',' << format_number(s.position.lat) << ',' << format_number(s.position.lon) << ',' << s.country
        << ',' << format_number(s.capacity) << '\n';
}

std::vector<std::string> site_countries(std::span<const LandingSite> sites) {
  std::vector<std::string> out;
  for (const auto& s : sites)
    if (std::find(out.begin(), out.end(), s.country) == out.end()) out.push_back(s.country);
  return out;
}

}  // namespace pirogue
