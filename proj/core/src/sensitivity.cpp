#include "pirogue/sensitivity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "csv.hpp"
#include "pirogue/errors.hpp"
#include "pirogue/metrics.hpp"
#include "pirogue/outputs.hpp"
#include "pirogue/rng.hpp"
#include "pirogue/sobol_sequence.hpp"

namespace pirogue {

void validate_param_spec(const ParamSpec& spec) {
  if (!(spec.min < spec.max) || !std::isfinite(spec.min) || !std::isfinite(spec.max))
    throw ValidationError("parameter '" + spec.name + "': need finite min < max");
  if (spec.scale == ParamScale::log10 && !(spec.min > 0.0))
    throw ValidationError("parameter '" + spec.name + "': log10 scale needs a positive range");
}

double map_unit(const ParamSpec& spec, double u) {
  if (spec.scale == ParamScale::log10) {
    const double lo = std::log10(spec.min);
    const double hi = std::log10(spec.max);
    return std::pow(10.0, lo + u * (hi - lo));
  }
  return spec.min + u * (spec.max - spec.min);
}

std::vector<ParamSpec> load_param_specs(const std::filesystem::path& path) {
  const auto t = csv::read(path);
  csv::expect_header(t, {"name", "min", "max", "scale"});
  std::vector<ParamSpec> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    ParamSpec p;
    p.name = t.rows[i][0];
    p.min = t.number(i, 1);
    p.max = t.number(i, 2);
    const auto& scale = t.rows[i][3];
    if (scale == "linear") p.scale = ParamScale::linear;
    else if (scale == "log10") p.scale = ParamScale::log10;
    else t.fail(i, "scale must be linear or log10");
    try {
      if (!is_numeric_key(p.name)) throw ValidationError("'" + p.name + "' is not a numeric config key");
      validate_param_spec(p);
    } catch (const ValidationError& e) {
      t.fail(i, e.what());
    }
    for (const auto& q : out)
      if (q.name == p.name) t.fail(i, "duplicate parameter '" + p.name + "'");
    out.push_back(std::move(p));
  }
  if (out.empty()) throw ValidationError(path.string() + ": no parameters");
  return out;
}

std::vector<ParamSpec> default_param_specs() {
  std::vector<ParamSpec> out = {{"delta_sst", -2.0, 2.0, ParamScale::linear}};
  for (int c = 1; c <= 3; ++c) out.push_back({"cat" + std::to_string(c) + ".campaign_prob", 0.0, 1.0, ParamScale::linear});
  for (int c = 1; c <= 3; ++c) out.push_back({"cat" + std::to_string(c) + ".campaign_max_months", 1.0, 10.0, ParamScale::linear});
  out.push_back({"cat1.q", 1e-6, 1e-5, ParamScale::log10});
  out.push_back({"cat2.q", 1e-5, 1e-4, ParamScale::log10});
  out.push_back({"cat3.q", 1e-4, 1e-3, ParamScale::log10});
  out.push_back({"cat1.storage", 0.25, 0.75, ParamScale::linear});
  out.push_back({"cat2.storage", 0.5, 1.5, ParamScale::linear});
  out.push_back({"cat3.storage", 1.0, 100.0, ParamScale::linear});
  return out;
}

SaltelliDesign saltelli_sample(std::span<const ParamSpec> specs, std::size_t base_samples, std::uint64_t seed,
                               SampleScheme scheme) {
  const std::size_t d = specs.size();
  if (d == 0) throw ValidationError("Saltelli design needs at least one parameter");
  if (base_samples == 0 || (base_samples & (base_samples - 1)) != 0)
    throw ValidationError("Saltelli base sample count must be a power of two");
  for (const auto& s : specs) validate_param_spec(s);
  if (scheme == SampleScheme::sobol && 2 * d > SobolSequence::kMaxDimensions)
    throw ValidationError("Sobol scheme supports at most " + std::to_string(SobolSequence::kMaxDimensions / 2) +
                          " parameters");

  std::vector<std::vector<double>> a(base_samples, std::vector<double>(d));
  std::vector<std::vector<double>> b(base_samples, std::vector<double>(d));
  if (scheme == SampleScheme::sobol) {
    SobolSequence seq(static_cast<unsigned>(2 * d), seed == 0 ? 0 : mix_seed(seed, 0));
    for (std::size_t j = 0; j < base_samples; ++j) {
      const auto u = seq.next();
      for (std::size_t i = 0; i < d; ++i) {
        a[j][i] = u[i];
        b[j][i] = u[d + i];
      }
    }
  } else {
    Rng rng(seed);
    for (std::size_t j = 0; j < base_samples; ++j) {
      for (std::size_t i = 0; i < d; ++i) a[j][i] = rng.uniform();
      for (std::size_t i = 0; i < d; ++i) b[j][i] = rng.uniform();
    }
  }
  const auto to_params = [&](const std::vector<double>& u) {
    std::vector<double> x(d);
    for (std::size_t i = 0; i < d; ++i) x[i] = map_unit(specs[i], u[i]);
    return x;
  };
  SaltelliDesign design;
  design.base_samples = base_samples;
  design.dimensions = d;
  design.rows.reserve(base_samples * (d + 2));
  for (std::size_t j = 0; j < base_samples; ++j) design.rows.push_back(to_params(a[j]));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < base_samples; ++j) {
      auto u = a[j];
      u[i] = b[j][i];
      design.rows.push_back(to_params(u));
    }
  }
  for (std::size_t j = 0; j < base_samples; ++j) design.rows.push_back(to_params(b[j]));
  return design;
}

std::vector<std::string> SobolReport::ranking_by_total() const {
  std::vector<const SobolIndex*> sorted;
  for (const auto& idx : indices) sorted.push_back(&idx);
  std::stable_sort(sorted.begin(), sorted.end(), [](const SobolIndex* x, const SobolIndex* y) { return x->st_raw > y->st_raw; });
  std::vector<std::string> out;
  for (const auto* idx : sorted) out.push_back(idx->name);
  return out;
}

namespace {

struct Estimate {
  double s1 = 0.0;
  double st = 0.0;
};

double variance_of(std::span<const double> ya, std::span<const double> yb, std::span<const std::size_t> rows) {
  double mean = 0.0;
  for (const auto j : rows) mean += ya[j] + yb[j];
  mean /= static_cast<double>(2 * rows.size());
  double v = 0.0;
  for (const auto j : rows) v += (ya[j] - mean) * (ya[j] - mean) + (yb[j] - mean) * (yb[j] - mean);
  return v / static_cast<double>(2 * rows.size());
}

Estimate estimate(std::span<const double> ya, std::span<const double> yb, std::span<const double> yab,
                  std::span<const std::size_t> rows, double variance) {
  double first = 0.0;
  double total = 0.0;
  for (const auto j : rows) {
    first += yb[j] * (yab[j] - ya[j]);
    total += (ya[j] - yab[j]) * (ya[j] - yab[j]);
  }
  const double n = static_cast<double>(rows.size());
  return {first / n / variance, total / n / (2.0 * variance)};
}

double percentile(std::vector<double> v, double p) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double clamp_index(double v) { return std::clamp(v, -0.1, 1.1); }

}  // namespace

SobolReport sobol_indices(std::span<const double> y_a, std::span<const double> y_b,
                          const std::vector<std::vector<double>>& y_ab, std::span<const std::string> names,
                          std::uint64_t bootstrap_seed, int bootstrap_resamples) {
  const std::size_t n = y_a.size();
  if (y_b.size() != n || y_ab.size() != names.size()) throw ValidationError("Sobol estimator: inconsistent sizes");
  for (const auto& col : y_ab)
    if (col.size() != n) throw ValidationError("Sobol estimator: inconsistent sizes");

  SobolReport report;
  report.base_samples = n;
  std::vector<std::size_t> base_rows;
  for (std::size_t j = 0; j < n; ++j) {
    bool ok = std::isfinite(y_a[j]) && std::isfinite(y_b[j]);
    for (const auto& col : y_ab) ok = ok && std::isfinite(col[j]);
    if (std::isfinite(y_a[j]) && std::isfinite(y_b[j])) base_rows.push_back(j);
    if (!ok) ++report.excluded_rows;
  }
  report.variance = base_rows.empty() ? 0.0 : variance_of(y_a, y_b, base_rows);
  const double scale = std::max({1.0, std::abs(base_rows.empty() ? 0.0 : y_a[base_rows[0]])});
  report.degenerate = base_rows.size() < 2 || !(report.variance > 1e-24 * scale * scale);

  // One set of resamples shared by every parameter, so the report does not
  // depend on parameter order.
  std::vector<std::vector<std::size_t>> resamples;
  std::vector<double> resample_variance;
  if (!report.degenerate) {
    Rng rng(bootstrap_seed);
    for (int b = 0; b < bootstrap_resamples; ++b) {
      std::vector<std::size_t> sample(base_rows.size());
      for (auto& s : sample) s = base_rows[rng.below(base_rows.size())];
      resample_variance.push_back(variance_of(y_a, y_b, sample));
      resamples.push_back(std::move(sample));
    }
  }

  for (std::size_t i = 0; i < names.size(); ++i) {
    SobolIndex idx;
    idx.name = names[i];
    if (report.degenerate) {
      idx.s1_raw = idx.st_raw = std::numeric_limits<double>::quiet_NaN();
      idx.s1_ci_low = idx.s1_ci_high = idx.st_ci_low = idx.st_ci_high = std::numeric_limits<double>::quiet_NaN();
      report.indices.push_back(idx);
      continue;
    }
    const auto finite = [&](std::size_t j) { return std::isfinite(y_ab[i][j]); };
    std::vector<std::size_t> rows;
    for (const auto j : base_rows)
      if (finite(j)) rows.push_back(j);
    const auto e = estimate(y_a, y_b, y_ab[i], rows, report.variance);
    idx.s1_raw = e.s1;
    idx.st_raw = e.st;
    idx.s1 = clamp_index(e.s1);
    idx.st = clamp_index(e.st);

    std::vector<double> s1s;
    std::vector<double> sts;
    for (std::size_t b = 0; b < resamples.size(); ++b) {
      if (!(resample_variance[b] > 0.0)) continue;
      std::vector<std::size_t> sample;
      for (const auto j : resamples[b])
        if (finite(j)) sample.push_back(j);
      if (sample.empty()) continue;
      const auto eb = estimate(y_a, y_b, y_ab[i], sample, resample_variance[b]);
      s1s.push_back(eb.s1);
      sts.push_back(eb.st);
    }
    idx.s1_ci_low = percentile(s1s, 0.025);
    idx.s1_ci_high = percentile(s1s, 0.975);
    idx.st_ci_low = percentile(sts, 0.025);
    idx.st_ci_high = percentile(sts, 0.975);
    report.indices.push_back(idx);
  }
  return report;
}

SobolReport sobol_indices(const SaltelliDesign& design, std::span<const double> outputs, std::span<const ParamSpec> specs,
                          std::uint64_t bootstrap_seed) {
  if (outputs.size() != design.rows.size()) throw ValidationError("output count does not match the design");
  const std::size_t n = design.base_samples;
  std::vector<double> ya(n), yb(n);
  std::vector<std::vector<double>> yab(design.dimensions, std::vector<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    ya[j] = outputs[design.a_row(j)];
    yb[j] = outputs[design.b_row(j)];
    for (std::size_t i = 0; i < design.dimensions; ++i) yab[i][j] = outputs[design.ab_row(i, j)];
  }
  std::vector<std::string> names;
  for (const auto& s : specs) names.push_back(s.name);
  return sobol_indices(ya, yb, yab, names, bootstrap_seed);
}

std::string MetricSpec::label() const {
  switch (kind) {
    case Kind::cumulative_total_catch: return "total_catch";
    case Kind::cumulative_catch_by_country: return "catch:" + argument;
    case Kind::final_biomass: return argument.empty() ? "biomass" : "biomass:" + argument;
  }
  return "?";
}

MetricSpec parse_metric(std::string_view text) {
  MetricSpec m;
  if (text == "total_catch") return m;
  if (text.substr(0, 6) == "catch:" && text.size() > 6) {
    m.kind = MetricSpec::Kind::cumulative_catch_by_country;
    m.argument = std::string(text.substr(6));
    return m;
  }
  if (text == "biomass") {
    m.kind = MetricSpec::Kind::final_biomass;
    return m;
  }
  if (text.substr(0, 8) == "biomass:" && text.size() > 8) {
    m.kind = MetricSpec::Kind::final_biomass;
    m.argument = std::string(text.substr(8));
    return m;
  }
  throw ValidationError("unknown metric '" + std::string(text) + "' (total_catch, catch:<country>, biomass[:<species>])");
}

double evaluate_metric(const MetricSpec& metric, const RunOutputs& out) {
  switch (metric.kind) {
    case MetricSpec::Kind::cumulative_total_catch:
      return out.total_landed;
    case MetricSpec::Kind::cumulative_catch_by_country: {
      const auto it = std::find(out.countries.begin(), out.countries.end(), metric.argument);
      if (it == out.countries.end()) throw ValidationError("no landing site in country '" + metric.argument + "'");
      return out.frames.back().catch_by_country[static_cast<std::size_t>(it - out.countries.begin())];
    }
    case MetricSpec::Kind::final_biomass: {
      double sum = 0.0;
      bool found = metric.argument.empty();
      for (std::size_t k = 0; k < out.species_names.size(); ++k) {
        if (!metric.argument.empty() && out.species_names[k] != metric.argument) continue;
        sum += out.final_biomass[k];
        found = true;
      }
      if (!found) throw ValidationError("unknown species '" + metric.argument + "'");
      return sum;
    }
  }
  return 0.0;
}

namespace {
bool is_integer_key(std::string_view key) {
  return key == "seed" || key == "years" || key == "months" || key == "start_year" || key == "reproduction_per_year" ||
         key.ends_with(".max_trip_hours") || key.ends_with(".campaign_max_months");
}
}  // namespace

void apply_parameter(RunConfig& config, const ParamSpec& spec, double value) {
  if (is_integer_key(spec.name))
    set_config_value(config, spec.name, std::to_string(static_cast<long long>(std::llround(value))));
  else
    set_config_value(config, spec.name, format_number(value));
}

SaltelliRun run_saltelli(const RunConfig& base, const WorldInputs& inputs, std::span<const ParamSpec> specs,
                         std::size_t base_samples, int horizon_months, const MetricSpec& metric, std::uint64_t seed,
                         int threads, const std::function<void(std::size_t, std::size_t)>& progress) {
  if (horizon_months < 1) throw ValidationError("horizon must be at least one month");
  for (const auto& s : specs)
    if (!is_numeric_key(s.name)) throw ValidationError("'" + s.name + "' is not a numeric config key");
  SaltelliRun result;
  result.design = saltelli_sample(specs, base_samples, seed);
  const std::size_t rows = result.design.rows.size();
  result.outputs.assign(rows, std::numeric_limits<double>::quiet_NaN());
  result.seeds.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) result.seeds[r] = mix_seed(seed, r + 1);

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  const auto worker = [&] {
    for (std::size_t r = next++; r < rows; r = next++) {
      try {
        RunConfig c = base;
        for (std::size_t i = 0; i < specs.size(); ++i) apply_parameter(c, specs[i], result.design.rows[r][i]);
        c.years = 0;
        c.months = horizon_months;
        c.seed = result.seeds[r];
        c.interventions.clear();
        const auto out = run(c, inputs);
        if (out.valid) result.outputs[r] = evaluate_metric(metric, out);
      } catch (const ValidationError&) {
        // Row stays NaN and is excluded from the estimate.
      }
      const std::size_t finished = ++done;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(finished, rows);
      }
    }
  };
  const int n_threads = std::max(1, threads);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  result.report = sobol_indices(result.design, result.outputs, specs, seed);
  result.report.output_name = metric.label();
  return result;
}

SaltelliRun run_saltelli(const RunConfig& base, std::span<const ParamSpec> specs, std::size_t base_samples,
                         int horizon_months, const MetricSpec& metric, std::uint64_t seed, int threads,
                         const std::function<void(std::size_t, std::size_t)>& progress) {
  return run_saltelli(base, load_inputs(base), specs, base_samples, horizon_months, metric, seed, threads, progress);
}

void write_saltelli(const SaltelliRun& run, std::span<const ParamSpec> specs, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "sobol_report.csv", std::ios::binary);
    if (!out) throw ValidationError("cannot write " + (dir / "sobol_report.csv").string());
    out << "output,parameter,s1,s1_ci_low,s1_ci_high,st,st_ci_low,st_ci_high,s1_raw,st_raw,degenerate\n";
    for (const auto& idx : run.report.indices)
      out << run.report.output_name << ',' << idx.name << ',' << format_number(idx.s1) << ','
          << format_number(idx.s1_ci_low) << ',' << format_number(idx.s1_ci_high) << ',' << format_number(idx.st) << ','
          << format_number(idx.st_ci_low) << ',' << format_number(idx.st_ci_high) << ',' << format_number(idx.s1_raw)
          << ',' << format_number(idx.st_raw) << ',' << (run.report.degenerate ? "true" : "false") << '\n';
  }
  std::ofstream out(dir / "raw_samples.csv", std::ios::binary);
  if (!out) throw ValidationError("cannot write " + (dir / "raw_samples.csv").string());
  out << "row,block,seed";
  for (const auto& s : specs) out << ',' << s.name;
  out << ",output\n";
  const std::size_t n = run.design.base_samples;
  for (std::size_t r = 0; r < run.design.rows.size(); ++r) {
    const std::size_t blk = r / n;
    const std::string block = blk == 0 ? "A" : blk == run.design.dimensions + 1 ? "B" : "AB" + std::to_string(blk);
    out << r << ',' << block << ',' << run.seeds[r];
    for (const double v : run.design.rows[r]) out << ',' << format_number(v);
    out << ',' << format_number(run.outputs[r]) << '\n';
  }
}

std::vector<OftRow> run_oft(const RunConfig& base, const WorldInputs& inputs, std::string_view axis,
                            std::span<const double> values, std::uint64_t seed) {
  if (!is_numeric_key(axis)) throw ValidationError("'" + std::string(axis) + "' is not a numeric config key");
  std::vector<OftRow> rows;
  for (const double v : values) {
    OftRow row;
    row.axis = std::string(axis);
    row.value = v;
    try {
      RunConfig c = base;
      apply_parameter(c, {std::string(axis), v, v + 1.0, ParamScale::linear}, v);
      c.seed = seed;
      const auto out = run(c, inputs);
      row.ok = out.valid;
      row.error = out.error;
      row.total_landed = out.total_landed;
      const auto years = annual_landings(out);
      row.mean_annual_catch = years.empty() ? 0.0 : std::accumulate(years.begin(), years.end(), 0.0) / static_cast<double>(years.size());
      row.final_biomass = out.final_biomass;
      row.collapsed = collapse_frame(out).has_value();
      row.short_migrations = out.frames.back().short_migrations;
      row.long_migrations = out.frames.back().long_migrations;
    } catch (const ValidationError& e) {
      row.ok = false;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<OftRow> run_oft(const RunConfig& base, std::string_view axis, std::span<const double> values,
                            std::uint64_t seed) {
  return run_oft(base, load_inputs(base), axis, values, seed);
}

void write_oft(std::span<const OftRow> rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << "axis,value,ok,total_landed,mean_annual_catch,final_biomass,collapsed,short_migrations,long_migrations,error\n";
  for (const auto& r : rows) {
    double biomass = 0.0;
    for (const double b : r.final_biomass) biomass += b;
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    out << r.axis << ',' << format_number(r.value) << ',' << (r.ok ? "true" : "false") << ',' << format_number(r.total_landed)
        << ',' << format_number(r.mean_annual_catch) << ',' << format_number(biomass) << ','
        << (r.collapsed ? "true" : "false") << ',' << r.short_migrations << ',' << r.long_migrations << ',' << err << '\n';
  }
}

}  // namespace pirogue
