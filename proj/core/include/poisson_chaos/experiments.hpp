#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "poisson_chaos/bounds.hpp"
#include "poisson_chaos/chaos.hpp"
#include "poisson_chaos/kernels.hpp"
#include "poisson_chaos/norms.hpp"
#include "poisson_chaos/rng.hpp"
#include "poisson_chaos/stats.hpp"

namespace poisson_chaos {

// Thread count: explicit value if > 0, else POISSON_CHAOS_THREADS, else hardware.
int resolve_thread_count(int requested);

// Runs body(i) for i in [0, count) on `threads` workers. Every replication
// draws only from its own stream, so results do not depend on the schedule.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

struct TailCurvePoint {
  double u = 0.0;
  std::size_t hits = 0;
  double frequency = 0.0;
  Interval wilson;
  double bound = 2.0;
  std::string regime;
};

struct ExperimentResult {
  std::string name;
  std::uint64_t seed = 0;
  std::size_t replications = 0;
  std::vector<TailCurvePoint> curve;
  std::vector<TailCurvePoint> secondary_curve;  // second statistic where one is compared
  double calibrated_c = 0.0;                    // NaN when no grid point constrains it
  std::vector<double> values;                   // per-replication statistic, index order
  std::map<std::string, double> scalars;
  bool passed = true;
  double runtime_seconds = 0.0;
};

enum class TailStatistic { integral, ustat };
enum class BoundFamily { integral_tail, simplified, ustat_tail };

struct TailPlan {
  StepKernel kernel;
  TailStatistic statistic = TailStatistic::integral;
  BoundFamily family = BoundFamily::simplified;
  double T = 1.0;
  std::size_t M = 1000;
  std::vector<double> u_grid;
  std::uint64_t seed = 1;
  double c = 1.0;
  int threads = 0;
  NormOptions norm_options;
};

// Empirical P(|X| >= u) with X = I_T(g) or U_T(g) - E U_T(g) on the
// semi-discrete model, paired with the chosen bound family.
ExperimentResult empirical_tail(const TailPlan& plan);

struct MaximalPlan {
  StepKernel kernel;
  double T = 1.0;
  std::size_t M = 1000;
  std::vector<double> u_grid;
  std::uint64_t seed = 1;
  std::size_t grid_points = 256;
  int threads = 0;
};

// Sup over jump times (both one-sided limits) and a fixed grid versus |I_T|.
// scalars["smallest_C"] is the least C in {1,2,4,8} with
// P(sup >= u) <= C P(|I_T| >= u / C) across the grid (0 if none).
ExperimentResult maximal_inequality_check(const MaximalPlan& plan);

struct DecouplingPlan {
  std::vector<double> probabilities;  // law of X on atoms 0..A-1
  Tensor h;                           // d-way over atoms, symmetric
  std::size_t n = 10;
  std::size_t M = 1000;
  std::vector<double> u_grid;
  std::uint64_t seed = 1;
  int threads = 0;
};

// curve = coupled tail, secondary_curve = decoupled tail;
// scalars["smallest_C"] for two-sided domination (NaN above 64).
ExperimentResult decoupling_check(const DecouplingPlan& plan);

struct LilPlan {
  DiscreteKernel kernel;  // d in {1, 2}
  int first_level = 4;    // ladder t_j = 2^j, j = first_level..last_level
  int last_level = 20;
  std::size_t seeds = 10;
  std::uint64_t seed = 1;
  int threads = 0;
};

struct LilPoint {
  double t = 0.0;
  double centered = 0.0;      // U_t - E U_t (= I_t for d = 1)
  double integral_norm = 0.0; // centered / (2 t log log t)^{d/2}
  double ustat_norm = 0.0;    // centered / (t^{d - m/2} (2 log log t)^{m/2})
  double first_order_norm = 0.0;  // centered / (t^{d - 1/2} (2 log log t)^{1/2})
};

struct LilResult {
  int order = 0;
  int degeneracy_order = 0;
  ClusterSet cluster_set;  // of g_m, scaled by C(d, m)
  std::vector<std::vector<LilPoint>> trajectories;  // per seed
  std::vector<double> running_max_integral;          // max |integral_norm| per seed
  std::vector<double> running_max_ustat;             // max |ustat_norm| per seed
  double runtime_seconds = 0.0;
};

// One evolving process per seed on the kernel's grid; counts updated incrementally.
LilResult lil_trajectory(const LilPlan& plan);

struct VariancePlan {
  DiscreteKernel kernel;
  double t = 1.0;
  std::size_t M = 1000;
  std::uint64_t seed = 1;
  double z_limit = 5.0;
  int threads = 0;
};

// scalars: empirical, theoretical, standard_error, z; passed = |z| <= z_limit.
ExperimentResult variance_check(const VariancePlan& plan);

struct IsometryPlan {
  StepKernel kernel;
  double T = 1.0;
  std::size_t M = 1000;
  std::uint64_t seed = 1;
  double z_limit = 5.0;
  int threads = 0;
};

// Var I_T against d! T^d ||g||^2 and the mean against 0.
ExperimentResult isometry_check(const IsometryPlan& plan);

void write_tail_curve_csv(std::ostream& os, const std::vector<TailCurvePoint>& curve);
void write_lil_csv(std::ostream& os, const LilResult& result);

}  // namespace poisson_chaos
