#include <benchmark/benchmark.h>

#include "parisian/hjb_verify.hpp"
#include "parisian/mc_sim.hpp"
#include "parisian/optimal_barrier.hpp"

namespace {

using namespace parisian;

SimConfig reference_config(std::size_t paths) {
  SimConfig cfg;
  cfg.model = LevyModel::brownian(1.0, std::sqrt(2.0));
  cfg.q = 2.0;
  cfg.p = 4.0;
  cfg.b = 0.0;
  cfg.n_paths = paths;
  cfg.dt = 1e-3;
  cfg.horizon = recommended_horizon(cfg.model, cfg.q, 1e-5);
  return cfg;
}

void BM_McValueSerial(benchmark::State& state) {
  const auto cfg = reference_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mc_value_serial(cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_McValueParallel(benchmark::State& state) {
  const auto cfg = reference_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mc_value(cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

ParisianContext cramer_lundberg_context() {
  return make_context(LevyModel::hyperexponential(2.0, 0.0, 1.0, {0.6, 0.4}, {1.0, 3.0}), 0.1, 1.0);
}

void BM_HjbSerial(benchmark::State& state) {
  const auto ctx = cramer_lundberg_context();
  const double b = optimal_barrier_parisian(ctx).b_star;
  for (auto _ : state) benchmark::DoNotOptimize(hjb_residual_report_serial(ctx, b, {-3.0, b + 5.0, 200}));
}

void BM_HjbParallel(benchmark::State& state) {
  const auto ctx = cramer_lundberg_context();
  const double b = optimal_barrier_parisian(ctx).b_star;
  for (auto _ : state) benchmark::DoNotOptimize(hjb_residual_report(ctx, b, {-3.0, b + 5.0, 200}));
}

}  // namespace

BENCHMARK(BM_McValueSerial)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_McValueParallel)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HjbSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HjbParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
