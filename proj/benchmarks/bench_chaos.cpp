#include <benchmark/benchmark.h>

#include <random>

#include "poisson_chaos/chaos.hpp"

using namespace poisson_chaos;

namespace {

StepKernel random_kernel(int d, std::size_t side) {
  Rng rng = make_rng(7);
  std::normal_distribution<double> n01;
  Tensor t(d, side);
  for (std::size_t f = 0; f < t.size(); ++f)
    if (!t.on_diagonal(f)) t[f] = n01(rng);
  return symmetrize(Grid::finite(std::vector<double>(side, 1.0)), symmetrize(t));
}

}  // namespace

static void BM_ChaosExpand(benchmark::State& state) {
  const auto g = random_kernel(static_cast<int>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(chaos_expand(g));
}
BENCHMARK(BM_ChaosExpand)->Args({2, 32})->Args({3, 16})->Args({4, 8});

static void BM_UstatFromCounts(benchmark::State& state) {
  const auto g = random_kernel(static_cast<int>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  const auto sample = sample_process(finite_space(g.grid), 3.0, 11);
  const auto counts = compensated_counts(g.grid, sample, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(ustat_from_counts(g.as_discrete(), counts.counts));
}
BENCHMARK(BM_UstatFromCounts)->Args({2, 32})->Args({3, 16});

static void BM_StepIntegral(benchmark::State& state) {
  const auto g = random_kernel(static_cast<int>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  const auto sample = sample_process(finite_space(g.grid), 3.0, 12);
  const auto counts = compensated_counts(g.grid, sample, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(wiener_ito_step(g, counts));
}
BENCHMARK(BM_StepIntegral)->Args({2, 32})->Args({3, 16});
