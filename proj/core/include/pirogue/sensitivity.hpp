#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pirogue/config.hpp"
#include "pirogue/engine.hpp"

namespace pirogue {

enum class ParamScale { linear, log10 };

/// One sampled input: a config key with its range.
struct ParamSpec {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  ParamScale scale = ParamScale::linear;
};

/// Checks the range and scale. Names are checked against config keys where a model is run.
void validate_param_spec(const ParamSpec& spec);
/// Maps u in [0,1) into the parameter range (uniform in the exponent for log10).
double map_unit(const ParamSpec& spec, double u);

/// CSV `name,min,max,scale`.
std::vector<ParamSpec> load_param_specs(const std::filesystem::path& path);
/// The 13 inputs of the reference design: climate offset, then campaign
/// probability, campaign duration, catchability and storage for categories 1-3.
std::vector<ParamSpec> default_param_specs();

enum class SampleScheme { sobol, random };

/**
 * Saltelli design: base matrices A and B (N rows, d columns) and d cross
 * matrices AB_i (A with column i taken from B). Rows are emitted in the
 * order A, AB_1 .. AB_d, B, giving N (d + 2) parameter vectors.
 */
struct SaltelliDesign {
  std::size_t base_samples = 0;
  std::size_t dimensions = 0;
  std::vector<std::vector<double>> rows;  // parameter space

  std::size_t a_row(std::size_t j) const { return j; }
  std::size_t ab_row(std::size_t i, std::size_t j) const { return (1 + i) * base_samples + j; }
  std::size_t b_row(std::size_t j) const { return (1 + dimensions) * base_samples + j; }
};

/// N must be a power of two and d >= 1. Throws ValidationError.
SaltelliDesign saltelli_sample(std::span<const ParamSpec> specs, std::size_t base_samples, std::uint64_t seed,
                               SampleScheme scheme = SampleScheme::sobol);

struct SobolIndex {
  std::string name;
  double s1 = 0.0;  // clamped to [-0.1, 1.1]
  double st = 0.0;
  double s1_raw = 0.0;
  double st_raw = 0.0;
  double s1_ci_low = 0.0, s1_ci_high = 0.0;
  double st_ci_low = 0.0, st_ci_high = 0.0;
};

struct SobolReport {
  std::string output_name;
  std::size_t base_samples = 0;
  bool degenerate = false;  // zero output variance; indices undefined
  double variance = 0.0;
  std::vector<SobolIndex> indices;
  std::size_t excluded_rows = 0;

  /// Index names sorted by decreasing total index.
  std::vector<std::string> ranking_by_total() const;
};

/**
 * First-order indices from mean(yB (yABi - yA)) / V and total indices from
 * mean((yA - yABi)^2) / 2V, V being the variance of [yA, yB]. 95% percentile
 * bootstrap intervals over resampled rows.
 */
SobolReport sobol_indices(std::span<const double> y_a, std::span<const double> y_b,
                          const std::vector<std::vector<double>>& y_ab, std::span<const std::string> names,
                          std::uint64_t bootstrap_seed = 7, int bootstrap_resamples = 200);

/// Splits outputs in design row order and estimates indices. Non-finite rows are excluded column-wise.
SobolReport sobol_indices(const SaltelliDesign& design, std::span<const double> outputs,
                          std::span<const ParamSpec> specs, std::uint64_t bootstrap_seed = 7);

/// Output of one model run used by the harness.
struct MetricSpec {
  enum class Kind { cumulative_total_catch, cumulative_catch_by_country, final_biomass };
  Kind kind = Kind::cumulative_total_catch;
  std::string argument;  // country or species name
  std::string label() const;
};
MetricSpec parse_metric(std::string_view text);
double evaluate_metric(const MetricSpec& metric, const RunOutputs& out);

/// Applies a sampled value to a config (integer keys are rounded).
void apply_parameter(RunConfig& config, const ParamSpec& spec, double value);

struct SaltelliRun {
  SaltelliDesign design;
  std::vector<double> outputs;      // NaN for failed rows
  std::vector<std::uint64_t> seeds;
  SobolReport report;
};

/**
 * Evaluates the model at every design row for `horizon_months`, each run seeded
 * from mix_seed(seed, row), then reduces in row order. `threads` > 1 evaluates
 * rows concurrently; the result does not depend on it.
 */
SaltelliRun run_saltelli(const RunConfig& base, const WorldInputs& inputs, std::span<const ParamSpec> specs,
                         std::size_t base_samples, int horizon_months, const MetricSpec& metric, std::uint64_t seed,
                         int threads = 1, const std::function<void(std::size_t, std::size_t)>& progress = {});
/// Same, loading the inputs named by `base`.
SaltelliRun run_saltelli(const RunConfig& base, std::span<const ParamSpec> specs, std::size_t base_samples,
                         int horizon_months, const MetricSpec& metric, std::uint64_t seed, int threads = 1,
                         const std::function<void(std::size_t, std::size_t)>& progress = {});

void write_saltelli(const SaltelliRun& run, std::span<const ParamSpec> specs, const std::filesystem::path& dir);

struct OftRow {
  std::string axis;
  double value = 0.0;
  bool ok = true;
  std::string error;
  double total_landed = 0.0;
  double mean_annual_catch = 0.0;
  std::vector<double> final_biomass;
  bool collapsed = false;
  std::int64_t short_migrations = 0;
  std::int64_t long_migrations = 0;
};

/// One run per value of `axis` (a numeric config key), everything else fixed.
std::vector<OftRow> run_oft(const RunConfig& base, const WorldInputs& inputs, std::string_view axis,
                            std::span<const double> values, std::uint64_t seed);
std::vector<OftRow> run_oft(const RunConfig& base, std::string_view axis, std::span<const double> values,
                            std::uint64_t seed);
void write_oft(std::span<const OftRow> rows, const std::filesystem::path& path);

}  // namespace pirogue
