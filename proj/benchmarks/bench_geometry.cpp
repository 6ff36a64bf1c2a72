#include <benchmark/benchmark.h>

#include "poisson_chaos/geometry.hpp"

using namespace poisson_chaos;

static void BM_GilbertBucket(benchmark::State& state) {
  const auto s = sample_process(SpaceConfig::torus(2, static_cast<double>(state.range(0))), 1.0, 21);
  for (auto _ : state) benchmark::DoNotOptimize(build_gilbert_graph(s, 1.0, 0.02, Metric::torus));
}
BENCHMARK(BM_GilbertBucket)->Arg(1000)->Arg(10000);

static void BM_GilbertNaive(benchmark::State& state) {
  const auto s = sample_process(SpaceConfig::torus(2, static_cast<double>(state.range(0))), 1.0, 21);
  for (auto _ : state) benchmark::DoNotOptimize(build_gilbert_graph_naive(s, 1.0, 0.02, Metric::torus));
}
BENCHMARK(BM_GilbertNaive)->Arg(1000)->Arg(10000);

static void BM_CountSubgraphs(benchmark::State& state) {
  const auto s = sample_process(SpaceConfig::torus(2, 5000.0), 1.0, 22);
  const auto g = build_gilbert_graph(s, 1.0, 0.03, Metric::torus);
  const Graph h = Graph::named(state.range(0) == 3 ? "K3" : "K4");
  for (auto _ : state) benchmark::DoNotOptimize(count_subgraphs(g, h));
}
BENCHMARK(BM_CountSubgraphs)->Arg(3)->Arg(4);
