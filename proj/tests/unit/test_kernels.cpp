#include <doctest.h>

#include <cmath>

#include "poisson_chaos/error.hpp"
#include "poisson_chaos/kernels.hpp"
#include "poisson_chaos/bounds.hpp"
#include "../support.hpp"

using namespace poisson_chaos;

namespace {

double eval2(const AnalyticKernel& k, double x, double y) { return eval(k, std::vector<double>{x, y}); }

}  // namespace

TEST_CASE("analytic kernel evaluation") {
  const SubgraphKernel edge{Graph::named("K2"), 1.0, Metric::euclidean, 1};
  CHECK(eval2(edge, 0.0, 0.5) == 1.0);
  CHECK(eval2(edge, 0.0, 1.5) == 0.0);
  CHECK(eval2(edge, 0.0, 1.0) == 1.0);  // closed ball

  PowerLengthKernel pl;
  pl.alpha = 1.0;
  pl.radius = {RadiusFunction::Kind::constant, 0.5, 0.0};
  pl.beta = 2.0;
  pl.metric = Metric::euclidean;
  CHECK(eval2(pl, 0.1, 0.9) == doctest::Approx(0.8));
  CHECK(eval2(pl, 0.0, 1.2) == 0.0);

  const double T = 2.0;
  CHECK(eval(OUOrder1Kernel{1.0, T}, std::vector<double>{T, 1.0}) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(ou_f1(1.0, T, -1.0) == doctest::Approx(std::exp(-2.0) * (1.0 - std::exp(-4.0))));
  CHECK(ou_f1(1.0, T, T + 1.0) == 0.0);
  // jump size enters squared
  CHECK(eval(OUOrder1Kernel{1.0, T}, std::vector<double>{0.5, 2.0}) == doctest::Approx(4.0 * ou_f1(1.0, T, 0.5)));
  CHECK(ou_f2(1.0, T, 0.3, 0.7) == doctest::Approx(ou_f2(1.0, T, 0.7, 0.3)));

  CHECK_THROWS_AS(eval(edge, std::vector<double>{0.0}), InvalidArgument);
}

TEST_CASE("torus distance wraps") {
  CHECK(distance(Metric::torus, std::vector<double>{0.05}, std::vector<double>{0.95}) == doctest::Approx(0.1));
  CHECK(distance(Metric::euclidean, std::vector<double>{0.05}, std::vector<double>{0.95}) == doctest::Approx(0.9));
  CHECK(unit_ball_volume(2) == doctest::Approx(M_PI));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0));
}

TEST_CASE("analytic kernel validation") {
  Graph disconnected;
  disconnected.vertices = 3;
  disconnected.edges = {{0, 1}};
  CHECK_THROWS_AS(validate(SubgraphKernel{disconnected, 0.1, Metric::torus, 1}), InvalidConfiguration);
  CHECK_THROWS_AS(validate(SubgraphKernel{Graph::named("K2"), -0.1, Metric::torus, 1}), InvalidConfiguration);
  PowerLengthKernel pl;
  pl.radius.r0 = 0.1;
  pl.beta = 1.5;
  CHECK_THROWS_AS(validate(pl), InvalidConfiguration);
  CHECK_THROWS_AS(validate(OUOrder1Kernel{-1.0, 1.0}), InvalidConfiguration);
  CHECK_THROWS_AS(validate(ProductMarkKernel{{-1.0, 1.0}, {1.0, 2.0, 3.0, 1.0}, 0.1, Metric::torus, 1}),
                  InvalidConfiguration);
  CHECK_THROWS_AS(Graph::named("K9"), InvalidArgument);
}

TEST_CASE("automorphisms") {
  CHECK(automorphism_count(Graph::named("K3")) == 6);
  CHECK(automorphism_count(Graph::named("path_2")) == 2);
  CHECK(automorphism_count(Graph::named("K4")) == 24);
  CHECK(automorphism_count(Graph::named("star_3")) == 6);
  CHECK(automorphism_count(Graph::named("K2")) == 2);
}

TEST_CASE("symmetrize step coefficients") {
  const Grid grid = Grid::finite({1.0, 1.0, 1.0});
  Tensor a(2, 3);
  a[0 * 3 + 1] = 2.0;
  const auto s = symmetrize(grid, a);
  CHECK(s.coeffs[0 * 3 + 1] == 1.0);
  CHECK(s.coeffs[1 * 3 + 0] == 1.0);

  Tensor b(3, 3);
  b[0 * 9 + 1 * 3 + 2] = 6.0;
  const auto sb = symmetrize(grid, b);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        const bool distinct = i != j && j != k && i != k;
        CHECK(sb.coeffs[static_cast<std::size_t>(i * 9 + j * 3 + k)] == (distinct ? 1.0 : 0.0));
      }

  Rng rng = make_rng(1);
  const auto g = pc_test::random_step_kernel(Grid::finite({1, 2, 3, 4}), 3, rng);
  CHECK(symmetrize(g.coeffs) == g.coeffs);
  Tensor raw(3, 4);
  std::normal_distribution<double> n01;
  for (std::size_t f = 0; f < raw.size(); ++f) raw[f] = n01(rng);
  const Tensor once = symmetrize(raw);
  CHECK(once.is_symmetric(0.0));
  CHECK(symmetrize(once) == once);

  Tensor diag(2, 3);
  diag[0] = 1.0;
  CHECK_THROWS_AS(symmetrize(grid, diag), InvalidConfiguration);
  CHECK_THROWS_AS(StepKernel::make(grid, diag), InvalidConfiguration);
  CHECK_THROWS_AS(StepKernel::make(grid, a), InvalidConfiguration);
}

TEST_CASE("discretize") {
  const Grid line = Grid::interval(0.0, 1.0, 10);
  const auto ones = discretize(ConstantKernel{2, 1.0, 1}, line);
  for (double v : ones.values.data()) CHECK(v == 1.0);

  // Banded indicator: midpoints sit at multiples of the cell width.
  const double r = 0.25, h = 0.1;
  const auto band = discretize(SubgraphKernel{Graph::named("K2"), r, Metric::euclidean, 1}, line);
  const auto width = static_cast<int>(std::floor(r / h + 1e-9));
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) CHECK(band.values[static_cast<std::size_t>(i * 10 + j)] == (std::abs(i - j) <= width ? 1.0 : 0.0));

  const Grid plane = Grid::regular(SpaceConfig::torus(2, 1.0), 4);
  CHECK_THROWS_AS(discretize(SubgraphKernel{Graph::named("K2"), r, Metric::euclidean, 1}, plane), InvalidArgument);

  PowerLengthKernel bad;
  bad.radius = {RadiusFunction::Kind::power_decay, 0.3, 8.0};
  bad.beta = 2.0;
  bad.metric = Metric::euclidean;
  CHECK_FALSE(power_length_condition_holds(bad, Grid::interval(0.0, 4.0, 40)));
  CHECK_THROWS_AS(discretize(bad, Grid::interval(0.0, 4.0, 40)), InvalidConfiguration);
}

TEST_CASE("clique sandwich on grid evaluations") {
  const Grid line = Grid::regular(SpaceConfig::torus(1, 1.0), 12);
  const double r = 0.1;
  for (const char* name : {"path_2", "star_2", "K3"}) {
    const Graph h = Graph::named(name);
    const int d = h.vertices;
    const auto lo = discretize(SubgraphKernel{Graph::complete(d), r, Metric::torus, 1}, line);
    const auto mid = discretize(SubgraphKernel{h, r, Metric::torus, 1}, line);
    const auto hi = discretize(SubgraphKernel{Graph::complete(d), d * r, Metric::torus, 1}, line);
    bool ok = true;
    for (std::size_t f = 0; f < mid.values.size(); ++f)
      ok = ok && lo.values[f] <= mid.values[f] + 1e-15 && mid.values[f] <= hi.values[f] + 1e-15;
    CHECK(ok);
  }
}

TEST_CASE("project kernel") {
  const Grid grid = Grid::finite({1.0, 1.0});
  const auto g = StepKernel::make(grid, Tensor(2, 2, std::vector<double>{0, 1, 1, 0}));
  const auto g1 = project_kernel(g, 1);
  CHECK(g1.values[0] == 1.0);
  CHECK(g1.values[1] == 1.0);
  CHECK(project_kernel(g, 2).values == g.coeffs);
  CHECK_THROWS_AS(project_kernel(g, 0), RangeError);
  CHECK_THROWS_AS(project_kernel(g, 3), RangeError);

  const DiscreteKernel zero{Grid::finite({1, 2, 3}), Tensor(3, 3)};
  for (int n = 1; n <= 3; ++n) CHECK(project_kernel(zero, n).values.is_zero());

  Rng rng = make_rng(2);
  const Grid w = pc_test::random_grid(4, 3.0, rng);
  const auto k = pc_test::random_step_kernel(w, 3, rng);
  const DiscreteKernel scaled{w, k.coeffs.scaled(2.5)};
  for (int n = 1; n <= 3; ++n) {
    const auto a = project_kernel(scaled, n).values, b = project_kernel(k, n).values.scaled(2.5);
    for (std::size_t f = 0; f < a.size(); ++f) CHECK(a[f] == doctest::Approx(b[f]).epsilon(1e-14));
    CHECK(project_kernel(k, n).values.is_symmetric(1e-12));
  }
}

TEST_CASE("to_step_kernel reports dropped diagonal mass") {
  const Grid grid = Grid::finite({1.0, 2.0});
  const DiscreteKernel g{grid, Tensor(2, 2, std::vector<double>{3, 1, 1, -2})};
  const auto conv = to_step_kernel(g);
  CHECK(conv.dropped_mass == doctest::Approx(3 * 1 + 2 * 4));
  CHECK(conv.dropped_l2_sq == doctest::Approx(9 * 1 + 4 * 4));
  CHECK(conv.kernel.coeffs[0] == 0.0);
  CHECK(conv.kernel.coeffs[1] == 1.0);
}

TEST_CASE("integral and weighted L2") {
  const Grid grid = Grid::finite({1.0, 2.0});
  const DiscreteKernel g{grid, Tensor(2, 2, std::vector<double>{0, 1, 1, 0})};
  CHECK(integral(g) == doctest::Approx(4.0));
  CHECK(l2_norm(g) == doctest::Approx(2.0));
}

TEST_CASE("OU discretization converges monotonically") {
  const double rho = 1.0, T = 2.0;
  const double e1 = ou_g1_norm_sq(1.0, rho, T), e2 = ou_g2_norm_sq(rho, T);
  double prev1 = INFINITY, prev2 = INFINITY;
  for (double step : {0.1, 0.05, 0.025}) {
    const Grid grid = ou_grid(rho, T, step, 1e-6);
    const double err1 = std::abs(std::pow(l2_norm(discretize(OUOrder1Kernel{rho, T}, grid)), 2) - e1);
    const double err2 = std::abs(std::pow(l2_norm(discretize(OUOrder2Kernel{rho, T}, grid)), 2) - e2);
    CHECK(err1 < prev1);
    CHECK(err2 < prev2);
    prev1 = err1;
    prev2 = err2;
  }
  const double L = ou_truncation(rho, T, 1e-6);
  CHECK(std::exp(-2.0 * rho * L) / (2.0 * rho) <= 1e-6 * T * (1 + 1e-12));
  CHECK_THROWS_AS(ou_grid(rho, 1.0, 0.3), InvalidConfiguration);
}
