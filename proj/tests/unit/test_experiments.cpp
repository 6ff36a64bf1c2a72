#include <doctest.h>

#include <cmath>
#include <sstream>

#include "poisson_chaos/error.hpp"
#include "poisson_chaos/experiments.hpp"
#include "../support.hpp"

using namespace poisson_chaos;

namespace {

TailPlan small_tail_plan(int threads) {
  Rng rng = make_rng(31);
  const Grid grid = pc_test::random_grid(4, 2.0, rng);
  TailPlan plan;
  plan.kernel = pc_test::random_step_kernel(grid, 2, rng);
  plan.T = 1.5;
  plan.M = 500;
  plan.u_grid = {0.5, 1.0, 2.0, 4.0};
  plan.seed = 32;
  plan.threads = threads;
  return plan;
}

}  // namespace

TEST_CASE("results do not depend on the thread count") {
  const auto a = empirical_tail(small_tail_plan(1));
  const auto b = empirical_tail(small_tail_plan(3));
  CHECK(a.values == b.values);
  for (std::size_t i = 0; i < a.curve.size(); ++i) CHECK(a.curve[i].hits == b.curve[i].hits);

  auto ustat_plan = small_tail_plan(1);
  ustat_plan.statistic = TailStatistic::ustat;
  ustat_plan.family = BoundFamily::ustat_tail;
  auto ustat_plan3 = ustat_plan;
  ustat_plan3.threads = 4;
  CHECK(empirical_tail(ustat_plan).values == empirical_tail(ustat_plan3).values);
}

TEST_CASE("tail curve structure") {
  const auto r = empirical_tail(small_tail_plan(1));
  REQUIRE(r.curve.size() == 4);
  for (std::size_t i = 1; i < r.curve.size(); ++i) {
    CHECK(r.curve[i].hits <= r.curve[i - 1].hits);
    CHECK(r.curve[i].bound <= r.curve[i - 1].bound);
  }
  for (const auto& p : r.curve) {
    CHECK(p.wilson.lo <= p.frequency);
    CHECK(p.frequency <= p.wilson.hi);
  }
  std::ostringstream os;
  write_tail_curve_csv(os, r.curve);
  CHECK(os.str().rfind("u,hits,frequency,wilson_lo,wilson_hi,bound,regime\r\n", 0) == 0);
}

TEST_CASE("plan validation") {
  auto plan = small_tail_plan(1);
  plan.M = 0;
  CHECK_THROWS_AS(empirical_tail(plan), InvalidConfiguration);
  plan = small_tail_plan(1);
  plan.u_grid = {2.0, 1.0};
  CHECK_THROWS_AS(empirical_tail(plan), InvalidConfiguration);
  plan.u_grid = {};
  CHECK_THROWS_AS(empirical_tail(plan), InvalidConfiguration);
  plan = small_tail_plan(1);
  plan.T = -1.0;
  CHECK_THROWS_AS(empirical_tail(plan), InvalidConfiguration);

  VariancePlan vp{small_tail_plan(1).kernel.as_discrete(), 1.0, 1, 1, 5.0, 1};
  CHECK_THROWS_AS(variance_check(vp), InvalidConfiguration);
}

TEST_CASE("zero kernel") {
  auto plan = small_tail_plan(1);
  plan.kernel = StepKernel::make(plan.kernel.grid, Tensor(2, plan.kernel.grid.size()));
  const auto r = empirical_tail(plan);
  for (const auto& p : r.curve) {
    CHECK(p.hits == 0);
    CHECK(p.bound == 0.0);
  }
}

TEST_CASE("maximal inequality for d = 1") {
  MaximalPlan plan;
  plan.kernel = StepKernel::make(Grid::finite({1.0, 1.0}), Tensor(1, 2, std::vector<double>{1.0, -0.5}));
  plan.T = 2.0;
  plan.M = 800;
  plan.u_grid = {1.0, 2.0, 3.0};
  plan.seed = 41;
  plan.threads = 1;
  const auto r = maximal_inequality_check(plan);
  const double C = r.scalars.at("smallest_C");
  CHECK(C >= 1.0);
  CHECK(C <= 8.0);
  // the supremum dominates the endpoint pathwise
  for (std::size_t i = 0; i < r.curve.size(); ++i) CHECK(r.curve[i].hits >= r.secondary_curve[i].hits);
}

TEST_CASE("decoupling") {
  DecouplingPlan plan;
  plan.probabilities = {0.3, 0.7};
  plan.h = Tensor(2, 2, 1.0);  // constant kernel: both sides equal n (n - 1)
  plan.n = 8;
  plan.M = 200;
  plan.u_grid = {10.0, 56.0, 57.0};
  plan.seed = 42;
  plan.threads = 2;
  const auto r = decoupling_check(plan);
  CHECK(r.scalars.at("smallest_C") == 1.0);
  for (double v : r.values) CHECK(v == 56.0);

  plan.h = Tensor(4, 2, 1.0);
  CHECK_THROWS_AS(decoupling_check(plan), InvalidConfiguration);
  plan.h = Tensor(2, 2, 1.0);
  plan.n = 51;
  CHECK_THROWS_AS(decoupling_check(plan), InvalidConfiguration);

  // d = 1: coupled and decoupled sums have the same law
  DecouplingPlan one;
  one.probabilities = {0.5, 0.5};
  one.h = Tensor(1, 2, std::vector<double>{1.0, -1.0});
  one.n = 20;
  one.M = 4000;
  one.u_grid = {2.0, 4.0, 6.0};
  one.seed = 43;
  one.threads = 1;
  const auto r1 = decoupling_check(one);
  for (std::size_t i = 0; i < r1.curve.size(); ++i) {
    const auto& a = r1.curve[i];
    const auto& b = r1.secondary_curve[i];
    CHECK(std::abs(a.frequency - b.frequency) <= 4.0 * std::sqrt(2.0 * a.frequency * (1 - a.frequency) / one.M) + 1e-3);
  }
}

TEST_CASE("LIL trajectories") {
  const DiscreteKernel g{Grid::finite({0.5, 0.5}), Tensor(1, 2, std::vector<double>{1.0, -1.0})};
  LilPlan plan{g, 4, 10, 3, 51, 1};
  const auto a = lil_trajectory(plan);
  CHECK(a.order == 1);
  CHECK(a.degeneracy_order == 1);
  CHECK(a.trajectories.size() == 3);
  CHECK(a.trajectories[0].size() == 7);
  CHECK(a.cluster_set.upper == doctest::Approx(1.0));

  // linear in the kernel
  LilPlan scaled = plan;
  scaled.kernel = DiscreteKernel{g.grid, g.values.scaled(3.0)};
  const auto b = lil_trajectory(scaled);
  for (std::size_t s = 0; s < 3; ++s)
    for (std::size_t j = 0; j < a.trajectories[s].size(); ++j)
      CHECK(b.trajectories[s][j].centered == doctest::Approx(3.0 * a.trajectories[s][j].centered));
  CHECK(b.cluster_set.upper == doctest::Approx(3.0));

  plan.threads = 3;
  const auto c = lil_trajectory(plan);
  CHECK(c.trajectories[2].back().centered == a.trajectories[2].back().centered);

  plan.last_level = 40;
  CHECK_THROWS_AS(lil_trajectory(plan), SizeError);
  plan.last_level = 10;
  plan.first_level = 1;
  CHECK_THROWS_AS(lil_trajectory(plan), InvalidConfiguration);
  plan.first_level = 4;
  plan.kernel = DiscreteKernel{Grid::finite({1.0}), Tensor(3, 1)};
  CHECK_THROWS_AS(lil_trajectory(plan), SizeError);

  std::ostringstream os;
  write_lil_csv(os, a);
  CHECK(os.str().rfind("seed_index,t,centered,integral_norm,ustat_norm,first_order_norm\r\n", 0) == 0);
}

TEST_CASE("isometry") {
  Rng rng = make_rng(61);
  const Grid grid = pc_test::random_grid(4, 2.0, rng);
  IsometryPlan plan{pc_test::random_step_kernel(grid, 2, rng), 1.5, 4000, 62, 5.0, 1};
  const auto r = isometry_check(plan);
  CHECK_MESSAGE(r.passed, "z_var = " << r.scalars.at("z_variance"));
  CHECK(std::abs(r.scalars.at("z_mean")) <= 5.0);
}

TEST_CASE("thread count resolution") {
  CHECK(resolve_thread_count(3) == 3);
  CHECK(resolve_thread_count(0) >= 1);
  std::vector<int> seen(100, 0);
  parallel_for(100, 4, [&](std::size_t i) { seen[i] += 1; });
  for (int v : seen) CHECK(v == 1);
  CHECK_THROWS_AS(parallel_for(10, 2, [](std::size_t i) { if (i == 7) throw DomainError("boom"); }), DomainError);
}
