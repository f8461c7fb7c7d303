// Command line front end: run, matrix, plot, gen-env, serve, saltelli, oft.
#include <csignal>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "pirogue/config.hpp"
#include "pirogue/engine.hpp"
#include "pirogue/errors.hpp"
#include "pirogue/matrix.hpp"
#include "pirogue/metrics.hpp"
#include "pirogue/outputs.hpp"
#include "pirogue/plot.hpp"
#include "pirogue/sensitivity.hpp"
#include "pirogue/steer_server.hpp"
#include "pirogue/synthetic_env.hpp"

namespace {

using namespace pirogue;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitInvariant = 2;

SteerServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw ValidationError("not a number in --values: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError("--values is empty");
  return out;
}

int cmd_run(const std::string& config_path, const std::string& out_arg, bool quiet) {
  RunConfig config = parse_run_config(config_path);
  if (!out_arg.empty()) config.out_dir = out_arg;
  if (config.out_dir.empty()) throw ValidationError("no output directory: set out_dir in the config or pass --out");
  const auto total_days = days_in_span(1, config.total_months());
  const auto out = run(config, [&](const MonitorFrame& f) {
    if (!quiet && f.index > 0 && (f.index % 30 == 0 || f.index == total_days))
      std::fprintf(stderr, "\r%s  day %lld/%lld", f.date.c_str(), static_cast<long long>(f.index),
                   static_cast<long long>(total_days));
  });
  if (!quiet) std::fprintf(stderr, "\n");
  write_outputs(out, config.out_dir);
  const auto years = annual_landings(out);
  std::printf("frames %zu, landed %.1f t, wrote %s\n", out.frames.size(), out.total_landed, config.out_dir.string().c_str());
  for (std::size_t y = 0; y < years.size(); ++y) std::printf("  year %zu: %.1f t\n", y + 1, years[y]);
  if (!out.valid) {
    std::fprintf(stderr, "invariant breach: %s\n", out.error.c_str());
    return kExitInvariant;
  }
  return kExitOk;
}

int cmd_matrix(const std::string& spec, int threads) {
  const auto matrix = parse_scenario_matrix(spec);
  const auto rows = run_matrix(matrix, threads);
  int invalid = 0;
  for (const auto& r : rows) {
    std::printf("%-40s %s%s\n", r.run_id.c_str(), r.ok ? "ok" : "FAILED", r.collapsed ? " collapsed" : "");
    if (!r.ok) ++invalid;
  }
  if (!matrix.out_dir.empty()) std::printf("summary: %s\n", (matrix.out_dir / "summary.csv").string().c_str());
  return invalid ? kExitInvariant : kExitOk;
}

int cmd_plot(const std::string& dir, const std::string& kind) {
  std::vector<PlotKind> kinds;
  if (kind == "all") kinds = {PlotKind::catch_, PlotKind::biomass, PlotKind::fleet, PlotKind::migrations};
  else kinds = {parse_plot_kind(kind)};
  for (const auto k : kinds)
    for (const auto& p : plot(dir, k)) std::printf("%s\n", p.string().c_str());
  return kExitOk;
}

int cmd_gen_env(const std::string& out, const std::string& preset) {
  const auto grid = make_synthetic_environment(parse_synthetic_preset(preset));
  write_environment(out, grid);
  std::printf("wrote %d x %d grid to %s\n", grid.ncols(), grid.nrows(), out.c_str());
  return kExitOk;
}

int cmd_serve(const std::string& config_path, const std::string& host, int port) {
  SteerServer server(parse_run_config(config_path));
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::printf("listening on %s:%d\n", host.c_str(), port);
  std::fflush(stdout);
  server.listen(host, port);
  g_server = nullptr;
  return kExitOk;
}

int cmd_saltelli(const std::string& config_path, const std::string& specs_path, std::size_t n, const std::string& metric,
                 int horizon, std::uint64_t seed, int threads, const std::string& out_arg) {
  const RunConfig config = parse_run_config(config_path);
  const auto specs = specs_path.empty() ? default_param_specs() : load_param_specs(specs_path);
  const auto m = parse_metric(metric);
  const std::filesystem::path out = out_arg.empty() ? config.out_dir / "saltelli" : std::filesystem::path(out_arg);
  if (out.empty()) throw ValidationError("no output directory: pass --out");
  const auto result = run_saltelli(config, specs, n, horizon, m, seed, threads, [](std::size_t done, std::size_t total) {
    if (done % 16 == 0 || done == total) std::fprintf(stderr, "\rrun %zu/%zu", done, total);
  });
  std::fprintf(stderr, "\n");
  write_saltelli(result, specs, out);
  const auto& r = result.report;
  std::printf("metric %s, N = %zu, %zu runs, %zu excluded rows%s\n", r.output_name.c_str(), r.base_samples,
              result.outputs.size(), r.excluded_rows, r.degenerate ? ", DEGENERATE (zero variance)" : "");
  for (const auto& name : r.ranking_by_total()) {
    for (const auto& idx : r.indices)
      if (idx.name == name)
        std::printf("  %-26s S1 %7.3f [%6.3f, %6.3f]  ST %7.3f [%6.3f, %6.3f]\n", name.c_str(), idx.s1, idx.s1_ci_low,
                    idx.s1_ci_high, idx.st, idx.st_ci_low, idx.st_ci_high);
  }
  std::printf("wrote %s\n", out.string().c_str());
  return kExitOk;
}

int cmd_oft(const std::string& config_path, const std::string& axis, const std::string& values, std::uint64_t seed,
            const std::string& out) {
  const RunConfig config = parse_run_config(config_path);
  const auto rows = run_oft(config, axis, parse_values(values), seed);
  write_oft(rows, out);
  int invalid = 0;
  for (const auto& r : rows) {
    std::printf("%s = %g: mean annual catch %.1f t%s%s\n", r.axis.c_str(), r.value, r.mean_annual_catch,
                r.collapsed ? ", collapsed" : "", r.ok ? "" : ", FAILED");
    if (!r.ok) ++invalid;
  }
  return invalid ? kExitInvariant : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pirogue: agent-based simulator of an artisanal pirogue fishery"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pirogue::version()));

  std::string config, out, spec, dir, kind = "all", preset = "desk", host = "127.0.0.1", specs, metric = "total_catch",
                                     axis, values;
  int threads = 1, port = 8080, horizon = 6;
  std::size_t n = 64;
  std::uint64_t seed = 1;
  bool quiet = false;

  auto* run_cmd = app.add_subcommand("run", "Run one simulation and write its outputs");
  run_cmd->add_option("--config", config, "Run config file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", out, "Output directory (overrides out_dir)");
  run_cmd->add_flag("--quiet", quiet, "No progress output");

  auto* matrix_cmd = app.add_subcommand("matrix", "Run a scenario matrix");
  matrix_cmd->add_option("--spec", spec, "Matrix file")->required()->check(CLI::ExistingFile);
  matrix_cmd->add_option("--threads", threads, "Parallel runs")->check(CLI::PositiveNumber);

  auto* plot_cmd = app.add_subcommand("plot", "Render SVG charts from a run directory");
  plot_cmd->add_option("--dir", dir, "Run directory")->required();
  plot_cmd->add_option("--kind", kind, "catch, biomass, fleet, migrations or all");

  auto* gen_cmd = app.add_subcommand("gen-env", "Write a synthetic environment raster set");
  gen_cmd->add_option("--out", out, "Output directory")->required();
  gen_cmd->add_option("--preset", preset, "desk or fullscale-synthetic");

  auto* serve_cmd = app.add_subcommand("serve", "Serve the steering HTTP API");
  serve_cmd->add_option("--config", config, "Base run config")->required()->check(CLI::ExistingFile);
  serve_cmd->add_option("--port", port, "TCP port")->check(CLI::Range(1, 65535));
  serve_cmd->add_option("--host", host, "Bind address");

  auto* sal_cmd = app.add_subcommand("saltelli", "Saltelli sampling and Sobol indices");
  sal_cmd->add_option("--config", config, "Base run config")->required()->check(CLI::ExistingFile);
  sal_cmd->add_option("--specs", specs, "Parameter CSV (name,min,max,scale); default is the 13-parameter set");
  sal_cmd->add_option("--n", n, "Base sample count, a power of two");
  sal_cmd->add_option("--metric", metric, "total_catch, catch:<country> or biomass[:<species>]");
  sal_cmd->add_option("--horizon", horizon, "Months simulated per row")->check(CLI::PositiveNumber);
  sal_cmd->add_option("--seed", seed, "Design and run seed");
  sal_cmd->add_option("--threads", threads, "Parallel runs")->check(CLI::PositiveNumber);
  sal_cmd->add_option("--out", out, "Output directory");

  auto* oft_cmd = app.add_subcommand("oft", "One-factor-at-a-time sweep");
  oft_cmd->add_option("--config", config, "Base run config")->required()->check(CLI::ExistingFile);
  oft_cmd->add_option("--axis", axis, "Numeric config key")->required();
  oft_cmd->add_option("--values", values, "Comma-separated values")->required();
  oft_cmd->add_option("--seed", seed, "Run seed");
  oft_cmd->add_option("--out", out, "Summary CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*run_cmd) return cmd_run(config, out, quiet);
    if (*matrix_cmd) return cmd_matrix(spec, threads);
    if (*plot_cmd) return cmd_plot(dir, kind);
    if (*gen_cmd) return cmd_gen_env(out, preset);
    if (*serve_cmd) return cmd_serve(config, host, port);
    if (*sal_cmd) return cmd_saltelli(config, specs, n, metric, horizon, seed, threads, out);
    if (*oft_cmd) return cmd_oft(config, axis, values, seed, out);
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const InvariantError& e) {
    std::fprintf(stderr, "invariant breach: %s\n", e.what());
    return kExitInvariant;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
  return kExitOk;
}
