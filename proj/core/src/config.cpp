#include "pirogue/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "csv.hpp"
#include "pirogue/errors.hpp"
#include "pirogue/outputs.hpp"

namespace pirogue {

FleetParams RunConfig::fleet_params() const {
  FleetParams p;
  p.categories = categories;
  for (auto& c : p.categories) c.catchability *= q_scale;
  p.b_crit = b_crit;
  p.representation_factor = representation_factor;
  p.incidental = incidental;
  return p;
}

namespace {

std::string_view to_string(IncidentalDemersal m) {
  switch (m) {
    case IncidentalDemersal::never: return "never";
    case IncidentalDemersal::when_no_pelagic: return "when_no_pelagic";
    case IncidentalDemersal::always: return "always";
  }
  return "?";
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
    throw ValidationError(std::string(key) + ": not a number: '" + std::string(v) + "'");
  return out;
}

template <typename Int>
Int to_int(std::string_view key, std::string_view v) {
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
    throw ValidationError(std::string(key) + ": not an integer: '" + std::string(v) + "'");
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError(std::string(key) + ": expected true or false, got '" + std::string(v) + "'");
}

// Splits `catN.field`; returns category 0 if the key has no category prefix.
std::pair<int, std::string_view> category_key(std::string_view key) {
  if (key.size() > 5 && key.substr(0, 3) == "cat" && key[4] == '.' && key[3] >= '1' && key[3] <= '3')
    return {key[3] - '0', key.substr(5)};
  return {0, key};
}

bool category_field_numeric(std::string_view field, int cat) {
  return field == "q" || field == "storage" || field == "radius_km" || field == "max_trip_hours" ||
         field == "campaign_prob" || field == "campaign_max_months" || field == "speed_kmh" ||
         (cat == 3 && field == "demersal_access_fraction");
}

}  // namespace

bool is_numeric_key(std::string_view key) {
  const auto [cat, field] = category_key(key);
  if (cat != 0) return category_field_numeric(field, cat);
  return key == "seed" || key == "years" || key == "months" || key == "start_year" || key == "reproduction_per_year" ||
         key == "b_crit" || key == "delta_sst" || key == "representation_factor" || key == "q_scale";
}

void set_config_value(RunConfig& c, std::string_view key, std::string_view value) {
  const auto [cat, field] = category_key(key);
  if (cat != 0) {
    auto& p = c.categories[static_cast<std::size_t>(cat - 1)];
    if (field == "q") p.catchability = to_double(key, value);
    else if (field == "storage") p.storage_tons = to_double(key, value);
    else if (field == "radius_km") p.radius_km = to_double(key, value);
    else if (field == "max_trip_hours") p.max_trip_hours = to_int<int>(key, value);
    else if (field == "campaign_prob") p.campaign_prob = to_double(key, value);
    else if (field == "campaign_max_months") p.campaign_max_months = to_int<int>(key, value);
    else if (field == "speed_kmh") p.speed_kmh = to_double(key, value);
    else if (cat == 3 && field == "demersal_access_fraction") p.demersal_access_fraction = to_double(key, value);
    else throw ValidationError("unknown config key '" + std::string(key) + "'");
    return;
  }
  if (key == "env_dir") c.env_dir = std::string(value);
  else if (key == "sites") c.sites_path = std::string(value);
  else if (key == "fleet") c.fleet_path = std::string(value);
  else if (key == "species") c.species_path = std::string(value);
  else if (key == "out_dir") c.out_dir = std::string(value);
  else if (key == "seed") c.seed = to_int<std::uint64_t>(key, value);
  else if (key == "years") c.years = to_int<int>(key, value);
  else if (key == "months") c.months = to_int<int>(key, value);
  else if (key == "start_year") c.start_year = to_int<int>(key, value);
  else if (key == "reproduction_per_year") c.reproduction_per_year = to_int<int>(key, value);
  else if (key == "b_crit") c.b_crit = to_double(key, value);
  else if (key == "delta_sst") c.delta_sst = to_double(key, value);
  else if (key == "representation_factor") c.representation_factor = to_double(key, value);
  else if (key == "q_scale") c.q_scale = to_double(key, value);
  else if (key == "check_invariants") c.check_invariants = to_bool(key, value);
  else if (key == "incidental_demersal") {
    if (value == "never") c.incidental = IncidentalDemersal::never;
    else if (value == "when_no_pelagic") c.incidental = IncidentalDemersal::when_no_pelagic;
    else if (value == "always") c.incidental = IncidentalDemersal::always;
    else throw ValidationError("incidental_demersal must be never, when_no_pelagic or always");
  } else if (key == "intervention") {
    const auto body = csv::trim(value);
    const auto space = body.find_first_of(" \t");
    if (space == std::string_view::npos) throw ValidationError("intervention: expected '<day> <command>'");
    ScheduledIntervention s;
    s.day = to_int<std::int64_t>(key, body.substr(0, space));
    s.command = parse_intervention(csv::trim(body.substr(space)));
    c.interventions.push_back(std::move(s));
  } else {
    throw ValidationError("unknown config key '" + std::string(key) + "'");
  }
}

double get_numeric_value(const RunConfig& c, std::string_view key) {
  const auto [cat, field] = category_key(key);
  if (cat != 0 && category_field_numeric(field, cat)) {
    const auto& p = c.categories[static_cast<std::size_t>(cat - 1)];
    if (field == "q") return p.catchability;
    if (field == "storage") return p.storage_tons;
    if (field == "radius_km") return p.radius_km;
    if (field == "max_trip_hours") return p.max_trip_hours;
    if (field == "campaign_prob") return p.campaign_prob;
    if (field == "campaign_max_months") return p.campaign_max_months;
    if (field == "speed_kmh") return p.speed_kmh;
    return p.demersal_access_fraction;
  }
  if (key == "seed") return static_cast<double>(c.seed);
  if (key == "years") return c.years;
  if (key == "months") return c.months;
  if (key == "start_year") return c.start_year;
  if (key == "reproduction_per_year") return c.reproduction_per_year;
  if (key == "b_crit") return c.b_crit;
  if (key == "delta_sst") return c.delta_sst;
  if (key == "representation_factor") return c.representation_factor;
  if (key == "q_scale") return c.q_scale;
  throw ValidationError("'" + std::string(key) + "' is not a numeric config key");
}

void validate_run_config(const RunConfig& c) {
  if (c.years < 0 || c.months < 0) throw ValidationError("years and months must be non-negative");
  constexpr int kDivisors[] = {1, 2, 3, 4, 6, 12};
  if (std::find(std::begin(kDivisors), std::end(kDivisors), c.reproduction_per_year) == std::end(kDivisors))
    throw ValidationError("reproduction_per_year must divide 12 (1, 2, 3, 4, 6 or 12)");
  if (c.start_year < 1 || c.start_year > 9999) throw ValidationError("start_year out of range");
  if (!(c.b_crit >= 0.0)) throw ValidationError("b_crit must be non-negative");
  if (!(c.representation_factor >= 1.0)) throw ValidationError("representation_factor must be at least 1");
  if (!(c.q_scale >= 0.0)) throw ValidationError("q_scale must be non-negative");
  if (std::abs(c.delta_sst) > 10.0) throw ValidationError("delta_sst must lie within +-10 °C");
  for (std::size_t i = 0; i < c.categories.size(); ++i) {
    if (c.categories[i].category != static_cast<int>(i) + 1) throw ValidationError("category parameters out of order");
    validate_category(c.categories[i]);
    if (c.categories[i].catchability * c.q_scale > 1.0) throw ValidationError("effective catchability exceeds 1");
  }
  for (const auto& s : c.interventions)
    if (s.day < 0) throw ValidationError("intervention day must be non-negative");
}

namespace {

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
  if (p.empty() || p.is_absolute()) return p;
  return (std::filesystem::absolute(base) / p).lexically_normal();
}

}  // namespace

RunConfig parse_run_config_text(std::string_view text, const std::filesystem::path& base_dir, std::string_view origin) {
  RunConfig c;
  std::set<std::string, std::less<>> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto where = [&] { return std::string(origin) + ":" + std::to_string(lineno) + ": "; };
    // '#' starts a comment unless it sits inside a quoted site name.
    bool quoted = false;
    std::size_t cut = line.size();
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        cut = i;
        break;
      }
    }
    const auto body = csv::trim(std::string_view(line).substr(0, cut));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ValidationError(where() + "expected 'key = value'");
    const auto key = csv::trim(body.substr(0, eq));
    const auto value = csv::trim(body.substr(eq + 1));
    if (key != "intervention" && !seen.insert(std::string(key)).second)
      throw ValidationError(where() + "duplicate key '" + std::string(key) + "'");
    try {
      set_config_value(c, key, value);
    } catch (const ValidationError& e) {
      throw ValidationError(where() + e.what());
    }
  }
  if (!seen.contains("env_dir")) throw ValidationError(std::string(origin) + ": missing required key 'env_dir'");
  if (!seen.contains("fleet")) throw ValidationError(std::string(origin) + ": missing required key 'fleet'");
  c.env_dir = resolve(c.env_dir, base_dir);
  c.sites_path = resolve(c.sites_path, base_dir);
  c.fleet_path = resolve(c.fleet_path, base_dir);
  c.species_path = resolve(c.species_path, base_dir);
  c.out_dir = resolve(c.out_dir, base_dir);
  try {
    validate_run_config(c);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string(origin) + ": " + e.what());
  }
  const auto must_exist = [&](const std::filesystem::path& p, std::string_view key) {
    if (!p.empty() && !std::filesystem::exists(p))
      throw ValidationError(std::string(origin) + ": " + std::string(key) + ": no such file or directory: " + p.string());
  };
  must_exist(c.env_dir, "env_dir");
  must_exist(c.fleet_path, "fleet");
  must_exist(c.sites_path, "sites");
  must_exist(c.species_path, "species");
  return c;
}

RunConfig parse_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config_text(text.str(), path.parent_path(), path.string());
}

std::string format_run_config(const RunConfig& c) {
  std::ostringstream out;
  const auto path = [&](std::string_view key, const std::filesystem::path& p) {
    if (!p.empty()) out << key << " = " << p.generic_string() << '\n';
  };
  path("env_dir", c.env_dir);
  path("sites", c.sites_path);
  path("fleet", c.fleet_path);
  path("species", c.species_path);
  path("out_dir", c.out_dir);
  out << "seed = " << c.seed << '\n';
  out << "years = " << c.years << '\n';
  out << "months = " << c.months << '\n';
  out << "start_year = " << c.start_year << '\n';
  out << "reproduction_per_year = " << c.reproduction_per_year << '\n';
  out << "b_crit = " << format_number(c.b_crit) << '\n';
  out << "delta_sst = " << format_number(c.delta_sst) << '\n';
  out << "representation_factor = " << format_number(c.representation_factor) << '\n';
  out << "q_scale = " << format_number(c.q_scale) << '\n';
  for (const auto& p : c.categories) {
    const std::string k = "cat" + std::to_string(p.category) + ".";
    out << k << "q = " << format_number(p.catchability) << '\n';
    out << k << "storage = " << format_number(p.storage_tons) << '\n';
    out << k << "radius_km = " << format_number(p.radius_km) << '\n';
    out << k << "max_trip_hours = " << p.max_trip_hours << '\n';
    out << k << "campaign_prob = " << format_number(p.campaign_prob) << '\n';
    out << k << "campaign_max_months = " << p.campaign_max_months << '\n';
    out << k << "speed_kmh = " << format_number(p.speed_kmh) << '\n';
    if (p.category == 3) out << k << "demersal_access_fraction = " << format_number(p.demersal_access_fraction) << '\n';
  }
  out << "incidental_demersal = " << to_string(c.incidental) << '\n';
  out << "check_invariants = " << (c.check_invariants ? "true" : "false") << '\n';
  for (const auto& s : c.interventions) out << "intervention = " << s.day << ' ' << format_intervention(s.command) << '\n';
  return out.str();
}

std::uint64_t config_hash(const RunConfig& config) {
  RunConfig c = config;
  c.seed = 0;
  c.out_dir.clear();
  const std::string text = format_run_config(c);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace pirogue
