#include <benchmark/benchmark.h>

#include "poisson_chaos/grid.hpp"
#include "poisson_chaos/point_process.hpp"

using namespace poisson_chaos;

static void BM_SampleTorus(benchmark::State& state) {
  const auto space = SpaceConfig::torus(2, static_cast<double>(state.range(0)));
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sample_process(space, 1.0, seed++));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleTorus)->Arg(100)->Arg(1000)->Arg(10000);

static void BM_CellCounts(benchmark::State& state) {
  const Grid grid = Grid::finite(std::vector<double>(static_cast<std::size_t>(state.range(0)), 10.0));
  const auto sample = sample_process(finite_space(grid), 1.0, 3);
  for (auto _ : state) benchmark::DoNotOptimize(cell_counts(sample.cells, sample.times, 0.5, grid.size()));
}
BENCHMARK(BM_CellCounts)->Arg(16)->Arg(256);
