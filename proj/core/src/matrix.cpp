#include "pirogue/matrix.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "csv.hpp"
#include "pirogue/engine.hpp"
#include "pirogue/errors.hpp"
#include "pirogue/metrics.hpp"
#include "pirogue/outputs.hpp"

namespace pirogue {

namespace {

double parse_double(std::string_view where, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
    throw ValidationError(std::string(where) + ": not a number: '" + std::string(v) + "'");
  return out;
}

// "name:value, name:value" -> pairs, names unique.
std::vector<std::pair<std::string, std::string>> parse_levels(std::string_view where, std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& item : csv::split(text)) {
    const auto colon = item.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == item.size())
      throw ValidationError(std::string(where) + ": level must be name:value, got '" + item + "'");
    std::string name(csv::trim(std::string_view(item).substr(0, colon)));
    std::string value(csv::trim(std::string_view(item).substr(colon + 1)));
    if (name.find_first_of(" /\\") != std::string::npos)
      throw ValidationError(std::string(where) + ": level name '" + name + "' may not contain spaces or slashes");
    for (const auto& [n, v] : out)
      if (n == name) throw ValidationError(std::string(where) + ": duplicate level '" + name + "'");
    out.emplace_back(std::move(name), std::move(value));
  }
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
  if (p.is_absolute()) return p;
  return (std::filesystem::absolute(base) / p).lexically_normal();
}

}  // namespace

ScenarioMatrix parse_scenario_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  const auto dir = path.parent_path();
  ScenarioMatrix m;
  std::set<std::string, std::less<>> seen;
  bool have_base = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    const auto hash = line.find('#');
    const auto body = csv::trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ValidationError(where + ": expected key = value");
    const std::string key(csv::trim(body.substr(0, eq)));
    const auto value = csv::trim(body.substr(eq + 1));
    if (!seen.insert(key).second) throw ValidationError(where + ": duplicate key '" + key + "'");
    const std::string at = where + ": " + key;
    if (key == "base") {
      m.base = parse_run_config(resolve(std::string(value), dir));
      have_base = true;
    } else if (key == "climate") {
      for (auto& [n, v] : parse_levels(at, value)) m.climate.push_back({n, parse_double(at, v)});
    } else if (key == "infrastructure") {
      for (auto& [n, v] : parse_levels(at, value)) m.infrastructure.push_back({n, resolve(v, dir)});
    } else if (key == "fleet") {
      for (auto& [n, v] : parse_levels(at, value)) m.fleet.push_back({n, resolve(v, dir)});
    } else if (key == "catchability") {
      for (auto& [n, v] : parse_levels(at, value)) {
        std::array<double, 3> q{};
        std::size_t start = 0;
        for (int c = 0; c < 3; ++c) {
          const auto slash = v.find('/', start);
          if ((c < 2) == (slash == std::string::npos))
            throw ValidationError(at + ": catchability level needs q1/q2/q3, got '" + v + "'");
          q[static_cast<std::size_t>(c)] = parse_double(at, std::string_view(v).substr(start, slash - start));
          start = slash + 1;
        }
        m.catchability.push_back({n, q});
      }
    } else if (key == "replicates") {
      const auto r = parse_double(at, value);
      if (r < 1 || r != std::floor(r)) throw ValidationError(at + ": must be a positive integer");
      m.replicates = static_cast<int>(r);
    } else if (key == "base_seed") {
      std::uint64_t s = 0;
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), s);
      if (value.empty() || ec != std::errc() || ptr != value.data() + value.size())
        throw ValidationError(at + ": not an integer");
      m.base_seed = s;
    } else if (key == "out_dir") {
      m.out_dir = resolve(std::string(value), dir);
    } else {
      throw ValidationError(where + ": unknown key '" + key + "'");
    }
  }
  if (!have_base) throw ValidationError(path.string() + ": missing key 'base'");
  // Absent axes default to a single level taken from the base config.
  if (m.climate.empty()) m.climate.push_back({"base", m.base.delta_sst});
  if (m.infrastructure.empty()) m.infrastructure.push_back({"base", m.base.sites_path});
  if (m.fleet.empty()) m.fleet.push_back({"base", m.base.fleet_path});
  if (m.catchability.empty())
    m.catchability.push_back({"base", {m.base.categories[0].catchability, m.base.categories[1].catchability, m.base.categories[2].catchability}});
  for (const auto& lvl : m.infrastructure)
    if (!lvl.value.empty() && !std::filesystem::exists(lvl.value))
      throw ValidationError(path.string() + ": infrastructure '" + lvl.name + "': no such file " + lvl.value.string());
  for (const auto& lvl : m.fleet)
    if (!std::filesystem::exists(lvl.value))
      throw ValidationError(path.string() + ": fleet '" + lvl.name + "': no such file " + lvl.value.string());
  for (const auto& [name, dsst] : m.climate) {
    RunConfig probe = m.base;
    probe.delta_sst = dsst;
    try {
      validate_run_config(probe);
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + ": climate '" + name + "': " + e.what());
    }
  }
  for (const auto& [name, q] : m.catchability)
    for (const double v : q)
      if (!(v >= 0.0 && v <= 1.0))
        throw ValidationError(path.string() + ": catchability '" + name + "': q must lie in [0, 1]");
  return m;
}

std::vector<std::pair<MatrixRow, RunConfig>> expand_matrix(const ScenarioMatrix& m) {
  std::vector<std::pair<MatrixRow, RunConfig>> out;
  for (const auto& cl : m.climate)
    for (const auto& inf : m.infrastructure)
      for (const auto& fl : m.fleet)
        for (const auto& ca : m.catchability)
          for (int r = 0; r < m.replicates; ++r) {
            RunConfig c = m.base;
            c.delta_sst = cl.value;
            c.sites_path = inf.value;
            c.fleet_path = fl.value;
            for (std::size_t k = 0; k < 3; ++k) c.categories[k].catchability = ca.value[k];
            c.seed = m.base_seed + static_cast<std::uint64_t>(r);
            c.interventions = m.base.interventions;
            MatrixRow row;
            row.climate = cl.name;
            row.infrastructure = inf.name;
            row.fleet = fl.name;
            row.catchability = ca.name;
            row.replicate = r;
            row.seed = c.seed;
            row.config_hash = config_hash(c);
            row.run_id = cl.name + "_" + inf.name + "_" + fl.name + "_" + ca.name + "_r" + std::to_string(r);
            if (!m.out_dir.empty()) c.out_dir = m.out_dir / row.run_id;
            out.emplace_back(std::move(row), std::move(c));
          }
  return out;
}

namespace {

void fill_row(MatrixRow& row, const RunOutputs& out) {
  row.ok = out.valid;
  row.error = out.error;
  row.countries = out.countries;
  for (const auto& country : out.countries) {
    const auto years = annual_landings(out, country);
    row.final_year_catch.push_back(years.empty() ? 0.0 : years.back());
  }
  if (const auto f = collapse_frame(out)) {
    row.collapsed = true;
    row.years_to_collapse = static_cast<double>(*f) / 365.0;
  }
}

void write_summary(const std::vector<MatrixRow>& rows, const std::filesystem::path& path) {
  std::vector<std::string> countries;
  for (const auto& r : rows)
    for (const auto& c : r.countries)
      if (std::find(countries.begin(), countries.end(), c) == countries.end()) countries.push_back(c);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << "run_id,climate,infrastructure,fleet,catchability,replicate,seed,config_hash,ok,collapsed,years_to_collapse";
  for (const auto& c : countries) out << ",final_year_catch_" << c;
  out << ",error\n";
  for (const auto& r : rows) {
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(r.config_hash));
    out << r.run_id << ',' << r.climate << ',' << r.infrastructure << ',' << r.fleet << ',' << r.catchability << ','
        << r.replicate << ',' << r.seed << ',' << hash << ',' << (r.ok ? "true" : "false") << ','
        << (r.collapsed ? "true" : "false") << ',' << format_number(r.years_to_collapse);
    for (const auto& c : countries) {
      const auto it = std::find(r.countries.begin(), r.countries.end(), c);
      out << ',' << (it == r.countries.end() ? "0" : format_number(r.final_year_catch[static_cast<std::size_t>(it - r.countries.begin())]));
    }
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    out << ',' << err << '\n';
  }
}

}  // namespace

std::vector<MatrixRow> run_matrix(const ScenarioMatrix& matrix, int threads) {
  auto jobs = expand_matrix(matrix);
  std::vector<MatrixRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      auto& [row, config] = jobs[i];
      try {
        const auto out = run(config);
        fill_row(row, out);
        if (!config.out_dir.empty()) write_outputs(out, config.out_dir);
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
      }
      rows[i] = row;
    }
  };
  const int n = std::max(1, threads);
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (!matrix.out_dir.empty()) {
    std::filesystem::create_directories(matrix.out_dir);
    write_summary(rows, matrix.out_dir / "summary.csv");
  }
  return rows;
}

}  // namespace pirogue
