#include <benchmark/benchmark.h>

#include "pirogue/config.hpp"
#include "pirogue/engine.hpp"
#include "pirogue/env_grid.hpp"
#include "pirogue/fleet.hpp"
#include "pirogue/population.hpp"

using namespace pirogue;

namespace {

RunConfig config_named(const char* name) {
  RunConfig c = parse_run_config(std::filesystem::path(PIROGUE_BENCH_DATA_DIR) / "configs" / name);
  c.out_dir.clear();
  return c;
}

void BM_CatchStep(benchmark::State& state) {
  double b = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(catch_step(1e-3, b, 100.0));
    b += 1.0;
  }
}
BENCHMARK(BM_CatchStep);

void BM_Reproduce(benchmark::State& state) {
  const auto c = config_named("desk.cfg");
  const auto inputs = load_inputs(c);
  const SimClock clock;
  Rng rng(1);
  const auto pop0 = init_populations(inputs.species, inputs.grid, clock, rng);
  for (auto _ : state) {
    state.PauseTiming();
    auto pop = pop0;
    state.ResumeTiming();
    for (const auto& sp : inputs.species) benchmark::DoNotOptimize(reproduce(pop, sp, 2, inputs.grid, clock, rng));
  }
}
BENCHMARK(BM_Reproduce);

void BM_HabitatMask(benchmark::State& state) {
  const auto inputs = load_inputs(config_named("sustainable.cfg"));
  const SimClock clock;
  for (auto _ : state)
    for (const auto& sp : inputs.species) benchmark::DoNotOptimize(habitat_mask(inputs.grid, sp.envelope(), clock));
}
BENCHMARK(BM_HabitatMask);

void BM_StepDay(benchmark::State& state, const char* name) {
  auto c = config_named(name);
  c.years = 50;
  const auto inputs = load_inputs(c);
  Simulation sim(c, inputs);
  for (auto _ : state) sim.step_day();
}
BENCHMARK_CAPTURE(BM_StepDay, desk, "desk.cfg");
BENCHMARK_CAPTURE(BM_StepDay, fullscale, "sustainable.cfg")->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
