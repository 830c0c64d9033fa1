#include <benchmark/benchmark.h>

#include "holoflow/fields.hpp"
#include "holoflow/group.hpp"
#include "holoflow/jets.hpp"

using namespace holoflow;

static void BM_JetCompose(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  const JetEvaluator f = gaussian_field(d, d, order, 0.5);
  const Point x(static_cast<std::size_t>(d), 0.3);
  const Jet g = f(x, order);
  const Jet h = f(g.value(), order);
  for (auto _ : state) benchmark::DoNotOptimize(jet_compose(h, g, order));
}
BENCHMARK(BM_JetCompose)->ArgsProduct({{1, 2, 3}, {1, 2, 4}});

static void BM_InverseJet(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const DiffeoField phi = DiffeoField::certified(gaussian_field(2, 2, order, 0.1), 0.5);
  const Point y{0.2, -0.1};
  const Jet full = phi.jet(y, order);
  for (auto _ : state) benchmark::DoNotOptimize(inverse_jet(full, y));
}
BENCHMARK(BM_InverseJet)->DenseRange(1, 4);
