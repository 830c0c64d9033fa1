#include <benchmark/benchmark.h>

#include "holoflow/fields.hpp"
#include "holoflow/flow.hpp"

using namespace holoflow;

// Cost per RK4 step on a full jet.
static void BM_FlowStep(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const TimeField u = TimeField::autonomous(gaussian_field(2, 2, order, 0.5));
  const Point x{0.1, 0.2};
  constexpr int kSteps = 64;
  for (auto _ : state) benchmark::DoNotOptimize(flow_jet(u, x, order, {kSteps, 0, 1.0}));
  state.SetItemsProcessed(static_cast<long>(state.iterations()) * kSteps);
}
BENCHMARK(BM_FlowStep)->DenseRange(1, 3);
