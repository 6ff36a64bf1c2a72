#pragma once

// Shared fixtures for unit and acceptance tests: random grids, step kernels
// and tensors drawn from a fixed seed.

#include <random>
#include <vector>

#include "poisson_chaos/kernels.hpp"
#include "poisson_chaos/rng.hpp"

namespace pc_test {

using namespace poisson_chaos;

inline Grid random_grid(std::size_t cells, double mass, Rng& rng) {
  std::uniform_real_distribution<double> u(0.5, 1.5);
  std::vector<double> w(cells);
  double s = 0.0;
  for (auto& x : w) s += (x = u(rng));
  for (auto& x : w) x *= mass / s;
  return Grid::finite(std::move(w));
}

// Symmetric, zero on every diagonal, standard normal off it.
inline StepKernel random_step_kernel(const Grid& grid, int d, Rng& rng) {
  std::normal_distribution<double> n01;
  Tensor raw(d, grid.size());
  for (std::size_t f = 0; f < raw.size(); ++f) raw[f] = raw.on_diagonal(f) ? 0.0 : n01(rng);
  return symmetrize(grid, raw);
}

inline Tensor random_symmetric_tensor(int d, std::size_t side, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Tensor raw(d, side);
  for (std::size_t f = 0; f < raw.size(); ++f) raw[f] = u(rng);
  return symmetrize(raw);
}

}  // namespace pc_test
