// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "roughlab/metrics.hpp"
#include "roughlab/stochastic.hpp"

using namespace roughlab;

namespace {

GridRoughPath brownian_lift(std::size_t n, int depth) {
  const Dissection grid = Dissection::uniform(0.0, 1.0, n);
  return lift_on_grid(sample_brownian(grid, 2, RngSpec{7, 0}), grid, depth);
}

double area_sample(const RngSpec& r) {
  const Dissection grid = Dissection::uniform(0.0, 1.0, 256);
  const GroupElement g = chen_signature(sample_brownian(grid, 2, r), 2);
  return 0.5 * (g.tensor().coeff({1, 2}) - g.tensor().coeff({2, 1}));
}

void BM_HolderNormParallel(benchmark::State& st) {
  const GridRoughPath x = brownian_lift(static_cast<std::size_t>(st.range(0)), 2);
  for (auto _ : st) benchmark::DoNotOptimize(holder_norm(x, 0.3));
}

void BM_HolderNormSerial(benchmark::State& st) {
  const GridRoughPath x = brownian_lift(static_cast<std::size_t>(st.range(0)), 2);
  for (auto _ : st) benchmark::DoNotOptimize(reference::holder_norm(x, 0.3));
}

void BM_McRunParallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(mc_run(area_sample, static_cast<std::size_t>(st.range(0)), {3, 0}));
}

void BM_McRunSerial(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(mc_run_serial(area_sample, static_cast<std::size_t>(st.range(0)), {3, 0}));
}

}  // namespace

BENCHMARK(BM_HolderNormParallel)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HolderNormSerial)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_McRunParallel)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_McRunSerial)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
