#include <benchmark/benchmark.h>

#include "holoflow/fields.hpp"
#include "holoflow/hoelder.hpp"

using namespace holoflow;

static void BM_HoelderSeminorm(benchmark::State& state) {
  const int ppa = static_cast<int>(state.range(0));
  const SampleGrid grid(Box::cube(1, -6.0, 6.0), ppa);
  const JetSamples s = JetSamples::evaluate(gaussian_field(1, 1, 2, 1.0), grid, 2);
  for (auto _ : state) benchmark::DoNotOptimize(hoelder_seminorm(s, 2, 0.5));
  state.SetItemsProcessed(static_cast<long>(state.iterations()) * static_cast<long>(select_pairs(grid, kDefaultPairBudget).size()));
}
BENCHMARK(BM_HoelderSeminorm)->Arg(401)->Arg(4001);

static void BM_SampleJets2d(benchmark::State& state) {
  const SampleGrid grid(Box::cube(2, -4.0, 4.0), static_cast<int>(state.range(0)));
  const JetEvaluator f = gaussian_field(2, 2, 2, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(JetSamples::evaluate(f, grid, 2));
}
BENCHMARK(BM_SampleJets2d)->Arg(41)->Arg(201);
