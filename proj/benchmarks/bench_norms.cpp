#include <benchmark/benchmark.h>

#include <random>

#include "poisson_chaos/norms.hpp"

using namespace poisson_chaos;

namespace {

DiscreteKernel random_kernel(int d, std::size_t side) {
  Rng rng = make_rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Tensor t(d, side);
  for (std::size_t f = 0; f < t.size(); ++f) t[f] = u(rng);
  return {Grid::finite(std::vector<double>(side, 0.5)), symmetrize(t)};
}

}  // namespace

static void BM_InjectiveNorm(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto g = random_kernel(d, static_cast<std::size_t>(state.range(1)));
  Partition singletons{d, {}};
  for (int i = 1; i <= d; ++i) singletons.blocks.push_back({i});
  NormOptions opts;
  opts.restarts = 8;
  for (auto _ : state) benchmark::DoNotOptimize(partition_norm(g, singletons, opts));
}
BENCHMARK(BM_InjectiveNorm)->Args({2, 64})->Args({3, 16})->Args({4, 8});

static void BM_NormTable(benchmark::State& state) {
  const auto g = random_kernel(static_cast<int>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  NormOptions opts;
  opts.restarts = 8;
  for (auto _ : state) benchmark::DoNotOptimize(build_norm_table(g, opts));
}
BENCHMARK(BM_NormTable)->Args({2, 32})->Args({3, 12})->Unit(benchmark::kMillisecond);
