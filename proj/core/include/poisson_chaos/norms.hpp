#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "poisson_chaos/kernels.hpp"
#include "poisson_chaos/partition.hpp"
#include "poisson_chaos/point_process.hpp"

namespace poisson_chaos {

struct NormOptions {
  int restarts = 32;
  double tolerance = 1e-10;  // stop once a sweep gains less than this (relative)
  int max_sweeps = 500;
  std::uint64_t seed = 0x5EEDu;
};

struct NormResult {
  double value = 0.0;
  int sweeps = 0;             // summed over restarts
  double max_decrease = 0.0;  // largest objective drop seen in any block update
  double power_iteration = -1.0;  // two-block cross-check, -1 when not applicable
};

// sup of the weighted multilinear form over factors with unit weighted L2 norm,
// one factor per block of J (J must partition all of 1..d).
NormResult partition_norm_detailed(const DiscreteKernel& g, const Partition& J, const NormOptions& opts = {});
double partition_norm(const DiscreteKernel& g, const Partition& J, const NormOptions& opts = {});

// max over the first k indices of the J-norm of the slice; J partitions {k+1..d}.
// k = d (J empty) gives max |g|.
double conditional_norm_sup(const DiscreteKernel& g, int k, const Partition& J, const NormOptions& opts = {});

struct BruteForceOptions {
  int starts = 200;
  double grid_degrees = 2.0;
  int max_iterations = 4000;
  std::uint64_t seed = 0xB0B0u;
};

// Dense-search oracle; total tensor size <= 256.
double brute_force_norm(const DiscreteKernel& g, const Partition& J, const BruteForceOptions& opts = {});

struct NormEntry {
  int k = 0;
  Partition partition;       // representative of the shape class, over {k+1..d}
  long long multiplicity = 1;
  double value = 0.0;
  std::string key;           // "k/{...}"
};

struct NormTable {
  int order = 0;
  double l2 = 0.0;
  std::vector<double> B;     // B_k = sup-norm of the single-block conditional norm, k = 0..d
  std::vector<NormEntry> entries;

  const NormEntry* find(const std::string& key) const;
  std::string to_json() const;
};

// All (k, shape) entries for d <= 4.
NormTable build_norm_table(const DiscreteKernel& g, const NormOptions& opts = {});

std::string norm_key(int k, const Partition& J);

// Prop-style closed forms on the unit torus (r < 1/2) or grid quadrature on boxes.
struct BallQuantities {
  std::vector<double> A;  // A[k] = integral of lambda(B(x,r))^k, k = 0..kmax
  double B = 0.0;         // sup of lambda(B(x,r))
};
BallQuantities subgraph_bound_quantities(const SpaceConfig& space, double r, int kmax, std::size_t quadrature_cells = 64);

}  // namespace poisson_chaos
