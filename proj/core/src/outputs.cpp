#include "pirogue/outputs.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include "json.hpp"

#include "pirogue/errors.hpp"

namespace pirogue {

std::string_view version() { return "0.4.0"; }

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw InvariantError("number formatting failed");
  return std::string(buf, ptr);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  return out;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

void write_outputs(const RunOutputs& o, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto daily = [&](auto&& row) {
    for (const auto& f : o.frames) row(f);
  };
  {
    auto out = open_out(dir / "landings_daily.csv");
    out << "date,site,tons\n";
    daily([&](const MonitorFrame& f) {
      for (std::size_t s = 0; s < o.site_names.size(); ++s)
        out << f.date << ',' << o.site_names[s] << ',' << format_number(f.landings[s]) << '\n';
    });
  }
  {
    auto out = open_out(dir / "fleet_daily.csv");
    out << "date,site,cat,count\n";
    daily([&](const MonitorFrame& f) {
      for (std::size_t s = 0; s < o.site_names.size(); ++s)
        for (std::size_t c = 0; c < kCategoryCount; ++c)
          out << f.date << ',' << o.site_names[s] << ',' << c + 1 << ',' << f.fu_count[s][c] << '\n';
    });
  }
  {
    auto out = open_out(dir / "biomass_daily.csv");
    out << "date,species,tons\n";
    daily([&](const MonitorFrame& f) {
      for (std::size_t k = 0; k < o.species_names.size(); ++k)
        out << f.date << ',' << o.species_names[k] << ',' << format_number(f.biomass[k]) << '\n';
    });
  }
  {
    auto out = open_out(dir / "catch_country_daily.csv");
    out << "date,country,tons\n";
    daily([&](const MonitorFrame& f) {
      for (std::size_t k = 0; k < o.countries.size(); ++k)
        out << f.date << ',' << o.countries[k] << ',' << format_number(f.catch_by_country[k]) << '\n';
    });
  }
  {
    auto out = open_out(dir / "migrations.csv");
    out << "date,fu_id,kind,from,to\n";
    for (const auto& m : o.migrations)
      out << m.date << ',' << m.fu_id << ',' << (m.long_term ? "long" : "short") << ','
          << o.site_names[static_cast<std::size_t>(m.from)] << ',' << o.site_names[static_cast<std::size_t>(m.to)] << '\n';
  }
  {
    auto out = open_out(dir / "ledger.csv");
    out << "species,initial,growth,unplaced_growth,harvested,senescence,final_biomass\n";
    for (std::size_t k = 0; k < o.species_names.size(); ++k) {
      const auto& l = o.ledgers[k];
      out << o.species_names[k] << ',' << format_number(l.initial) << ',' << format_number(l.growth) << ','
          << format_number(l.unplaced_growth) << ',' << format_number(l.harvested) << ',' << format_number(l.senescence) << ',' << format_number(o.final_biomass[k])
          << '\n';
    }
  }
  {
    auto out = open_out(dir / "interventions.csv");
    out << "day,date,command\n";
    for (const auto& a : o.interventions) {
      std::string cmd = format_intervention(a.command);
      if (cmd.find_first_of(",\"") != std::string::npos) {
        std::string quoted = "\"";
        for (const char ch : cmd) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        cmd = quoted + '"';
      }
      out << a.day << ',' << a.date << ',' << cmd << '\n';
    }
  }
  nlohmann::ordered_json meta;
  meta["version"] = version();
  meta["seed"] = o.config.seed;
  meta["config_hash"] = hex(config_hash(o.config));
  meta["config"] = format_run_config(o.config);
  meta["valid"] = o.valid;
  if (!o.valid) meta["error"] = o.error;
  meta["frames"] = o.frames.size();
  meta["first_date"] = o.frames.empty() ? "" : o.frames.front().date;
  meta["last_date"] = o.frames.empty() ? "" : o.frames.back().date;
  meta["total_landed_tons"] = o.total_landed;
  meta["short_migrations"] = o.frames.empty() ? 0 : o.frames.back().short_migrations;
  meta["long_migrations"] = o.frames.empty() ? 0 : o.frames.back().long_migrations;
  meta["sites"] = o.site_names;
  meta["species"] = o.species_names;
  auto out = open_out(dir / "run_meta.json");
  out << meta.dump(2) << '\n';
}

}  // namespace pirogue
