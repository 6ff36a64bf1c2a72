#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "poisson_chaos/bounds.hpp"
#include "poisson_chaos/chaos.hpp"
#include "poisson_chaos/error.hpp"
#include "../support.hpp"

using namespace poisson_chaos;

namespace {

NormTable d1_table(double l2, double sup) {
  NormTable t;
  t.order = 1;
  t.l2 = l2;
  t.B = {l2, sup};
  t.entries.push_back({0, parse_partition(1, "{1}"), 1, l2, "0/{1}"});
  t.entries.push_back({1, Partition{1, {}}, 1, sup, "1/{}"});
  return t;
}

std::vector<NormTable> projected_tables(const DiscreteKernel& g) {
  std::vector<NormTable> out;
  for (int n = 1; n <= g.order(); ++n) out.push_back(build_norm_table(project_kernel(g, n)));
  return out;
}

}  // namespace

TEST_CASE("integral tail and moment examples") {
  const auto t = d1_table(1.0, 1.0);
  const auto b = integral_tail_bound(t, 1.0, 1.0, 1.0);
  CHECK(b.value == doctest::Approx(2.0 * std::exp(-1.0)));
  CHECK(integral_tail_bound(t, 1.0, 1e-12).value == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(integral_moment_bound(t, 1.0, 4.0) == doctest::Approx(6.0));

  // Gaussian regime only: zero sup entry is skipped
  const auto gauss = d1_table(1.0, 0.0);
  CHECK(integral_tail_bound(gauss, 1.0, 2.0).exponent == doctest::Approx(4.0 * integral_tail_bound(gauss, 1.0, 1.0).exponent));

  const auto zero = d1_table(0.0, 0.0);
  const auto z = integral_tail_bound(zero, 1.0, 1.0);
  CHECK(z.zero_kernel);
  CHECK(z.value == 0.0);
  CHECK(integral_moment_bound(zero, 1.0, 3.0) == 0.0);

  CHECK_THROWS_AS(integral_moment_bound(t, 1.0, 1.5), DomainError);
  CHECK_THROWS_AS(integral_tail_bound(t, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(integral_tail_bound(t, -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(integral_tail_bound(t, 1.0, 1.0, 0.0), DomainError);
}

TEST_CASE("moment bound is monotone in p and T") {
  Rng rng = make_rng(21);
  const DiscreteKernel g{pc_test::random_grid(3, 2.0, rng), pc_test::random_symmetric_tensor(2, 3, rng)};
  const auto t = build_norm_table(g);
  double prev = 0.0;
  for (double p = 2.0; p <= 20.0; p += 1.5) {
    const double m = integral_moment_bound(t, 1.5, p);
    CHECK(m >= prev);
    prev = m;
  }
  prev = 0.0;
  for (double T = 0.1; T <= 10.0; T *= 1.7) {
    const double m = integral_moment_bound(t, T, 3.0);
    CHECK(m >= prev);
    prev = m;
  }
}

TEST_CASE("simplified bound") {
  const std::vector<double> B{1.0, 1.0};
  CHECK(simplified_tail_bound(B, 1.0, 1.0).value == doctest::Approx(2.0 * std::exp(-1.0)));
  CHECK(simplified_tail_bound(B, 1.0, 1.0).value == doctest::Approx(integral_tail_bound(d1_table(1, 1), 1.0, 1.0).value));
  const std::vector<double> B0{1.0, 0.0};
  CHECK(simplified_tail_bound(B0, 1.0, 3.0).regime == "k=0");
  CHECK(simplified_moment_bound(B, 1.0, 4.0) == doctest::Approx(6.0));
}

TEST_CASE("integral bound never exceeds the simplified one where every ratio is >= 1") {
  Rng rng = make_rng(22);
  for (int d = 1; d <= 3; ++d) {
    const DiscreteKernel g{pc_test::random_grid(3, 3.0, rng), pc_test::random_symmetric_tensor(d, 3, rng)};
    const auto table = build_norm_table(g);
    for (double T : {0.5, 2.0})
      for (double u = 0.5; u < 400.0; u *= 1.6) {
        bool large = true;
        for (int k = 0; k <= d; ++k) large = large && u >= std::pow(T, (d - k) / 2.0) * table.B[static_cast<std::size_t>(k)];
        if (!large) continue;
        CHECK(integral_tail_bound(table, T, u).value <= simplified_tail_bound(table.B, T, u).value * (1 + 1e-12));
      }
  }
}

TEST_CASE("bounds are monotone in u and T and tend to 2 at u = 0+") {
  Rng rng = make_rng(23);
  const DiscreteKernel g{pc_test::random_grid(3, 3.0, rng), pc_test::random_symmetric_tensor(2, 3, rng)};
  const auto table = build_norm_table(g);
  const auto tables = projected_tables(g);
  using F = std::function<double(double, double)>;
  const std::vector<F> families{
      [&](double T, double u) { return integral_tail_bound(table, T, u).value; },
      [&](double T, double u) { return simplified_tail_bound(table.B, T, u).value; },
      [&](double T, double u) { return ustat_tail_bound(tables, T, u).value; },
      [&](double T, double u) { return subgraph_tail_bound(3.0 * T, T, 0.2, 3, u).value; },
      [&](double T, double u) { return ou_bound(1.0, 1.0, 1.0, T, u).value; },
  };
  for (const auto& f : families) {
    CHECK(f(1.0, 1e-9) == doctest::Approx(2.0).epsilon(1e-3));
    double prev = 2.0;
    for (double u = 0.01; u < 1e4; u *= 1.5) {
      const double v = f(1.0, u);
      CHECK(v <= prev * (1 + 1e-12));
      prev = v;
    }
    prev = 0.0;
    for (double T = 0.05; T < 50.0; T *= 1.5) {
      const double v = f(T, 3.0);
      CHECK(v >= prev * (1 - 1e-12));
      prev = v;
    }
  }
}

TEST_CASE("U-statistic tail bound") {
  const DiscreteKernel g1{Grid::finite({1.0, 2.0}), Tensor(1, 2, std::vector<double>{1.0, -0.5})};
  const auto t1 = build_norm_table(g1);
  for (double u : {0.3, 1.0, 5.0})
    CHECK(ustat_tail_bound({t1}, 2.0, u).value == doctest::Approx(integral_tail_bound(t1, 2.0, u).value));

  Rng rng = make_rng(24);
  const DiscreteKernel g{Grid::finite({1.0, 1.0}), Tensor(2, 2, std::vector<double>{0, 1, 1, 0})};
  const auto tables = projected_tables(g);
  CHECK(ustat_tail_bound(tables, 1.0, 1e8).regime == "n=2,k=2,J={}");
  CHECK(ustat_tail_bound(tables, 1.0, 1e8).exponent == doctest::Approx(std::pow(1e8, 0.5)));

  // Independent enumeration of the (n, k, J) terms for d = 2.
  const double T = 1.7, u = 3.0;
  const auto g1p = project_kernel(g, 1);
  struct Term {
    int n, k, blocks;
    double norm;
  };
  const std::vector<Term> terms{
      {1, 0, 1, l2_norm(g1p)},
      {1, 1, 0, g1p.values.max_abs()},
      {2, 0, 1, l2_norm(g)},
      {2, 0, 2, partition_norm(g, parse_partition(2, "{1}{2}"))},
      {2, 1, 1, conditional_norm_sup(g, 1, parse_partition(2, "{2}"))},
      {2, 2, 0, g.values.max_abs()},
  };
  double best = INFINITY;
  for (const auto& t : terms)
    best = std::min(best, std::pow(u / (std::pow(T, 2 - (t.n + t.k) / 2.0) * t.norm), 2.0 / (2 * t.k + t.blocks)));
  CHECK(ustat_tail_bound(tables, T, u).exponent == doctest::Approx(best));
  CHECK(ustat_moment_bound(tables, T, 2.0) > 0.0);
}

TEST_CASE("Gaussian scale against the variance identity") {
  Rng rng = make_rng(25);
  for (int d = 1; d <= 3; ++d) {
    const DiscreteKernel g{pc_test::random_grid(3, 2.0, rng), pc_test::random_symmetric_tensor(d, 3, rng)};
    const double T = 1.3;
    const double ratio = ustat_variance(g, T) / ustat_gaussian_scale(projected_tables(g), T);
    double lo = INFINITY, hi = 0.0;
    for (int n = 1; n <= d; ++n) {
      const double w = factorial(n) * binomial(d, n) * binomial(d, n);
      lo = std::min(lo, w);
      hi = std::max(hi, w);
    }
    CHECK(ratio >= lo * (1 - 1e-12));
    CHECK(ratio <= hi * (1 + 1e-12));
  }
}

TEST_CASE("subgraph tail bound regimes") {
  // d = 3, V = 1: u^2, u / (tB)^2 and u^{1/3} compete.
  CHECK(subgraph_tail_bound(1.0, 1.0, 1.0, 3, 1e-3).regime == "gaussian");
  CHECK(subgraph_tail_bound(1.0, 2.0, 5.0, 3, 100.0).regime == "linear");
  CHECK(subgraph_tail_bound(1.0, 1.0, 1.0, 3, 1e9).regime == "root");
  CHECK(subgraph_tail_bound(1.0, 2.0, 5.0, 3, 100.0).exponent == doctest::Approx(1.0));
  CHECK_THROWS_AS(subgraph_tail_bound(-1.0, 1.0, 1.0, 3, 1.0), DomainError);
}

TEST_CASE("power-length quantities") {
  const double r = 0.05, beta = 2.0, c = 50.0;
  const Grid grid = Grid::regular(SpaceConfig::torus(1, c), 200);
  PowerLengthKernel k;
  k.alpha = 1.0;
  k.radius = {RadiusFunction::Kind::constant, r, 0.0};
  k.beta = beta;
  k.metric = Metric::torus;
  k.dim = 1;
  const double h = 1.0 / 200;
  const double ball = c * h * (2.0 * std::floor(beta * r / h + 1e-9) + 1.0);  // midpoints within beta r
  for (double gamma : {0.0, 1.0, 2.0})
    for (double p : {0.0, 1.0, 2.0})
      CHECK(power_length_B(k, grid, gamma, p) == doctest::Approx(std::pow(r, gamma) * std::pow(ball, p)));
  // B_{gamma,p}^q = B_{gamma q, p q}
  for (double q : {0.5, 2.0 / 3.0, 3.0})
    CHECK(std::pow(power_length_B(k, grid, 1.0, 1.0), q) == doctest::Approx(power_length_B(k, grid, q, q)));
  const auto quant = power_length_quantities(k, grid);
  CHECK(power_length_variance_bound(quant, 2.0, beta, 1.0) > 0.0);
  const auto b = power_length_bound(quant, 1.0, 1e-9, beta, 1.0);
  CHECK(b.value == doctest::Approx(2.0).epsilon(1e-3));

  // alpha = 0: the linear term is the edge-count shape u / (t B_{0,1})
  k.alpha = 0.0;
  const auto q0 = power_length_quantities(k, grid);
  CHECK(q0.B_a_1 == doctest::Approx(power_length_B(k, grid, 0.0, 1.0)));
}

TEST_CASE("OU bound") {
  CHECK(ou_g1_norm_sq(1.0, 1.0, 5.0) == doctest::Approx(5.0 + (std::exp(-10.0) - 1.0) / 2.0));
  CHECK(ou_variance_bound(1.0, 2.0, 1e-12) < 1e-11);
  CHECK(ou_g2_norm_sq(1e6, 1.0) == doctest::Approx(1e-6).epsilon(1e-3));
  const auto b = ou_bound(1.0, 2.0, 1.0, 3.0, 100.0);
  CHECK(b.value > 0.0);
  CHECK(b.value < 2.0);
  CHECK_THROWS_AS(ou_bound(0.0, 2.0, 1.0, 3.0, 1.0), DomainError);
}

TEST_CASE("polynomial tail bound") {
  Rng rng = make_rng(26);
  const DiscreteKernel g{pc_test::random_grid(3, 2.0, rng), pc_test::random_symmetric_tensor(2, 3, rng)};
  CHECK(mixed_l1_l2_norm(g, {1, 2}) == doctest::Approx(l2_norm(g)));
  CHECK(polynomial_tail_bound(g, {1, 2}, 2.0, 4.0) == doctest::Approx(l2_norm(g) * 2.0 / 4.0));
  const DiscreteKernel zero{g.grid, Tensor(2, 3)};
  CHECK(polynomial_tail_bound(zero, {2}, 2.0, 1.0) == 0.0);

  // banded rows: sum_i w_i sqrt(sum_j w_j g_ij^2)
  const Grid w = Grid::finite({1.0, 2.0, 3.0});
  const DiscreteKernel band{w, Tensor(2, 3, std::vector<double>{1, 1, 0, 1, 1, 1, 0, 1, 1})};
  const double expect = 1.0 * std::sqrt(1.0 + 2.0) + 2.0 * std::sqrt(1.0 + 2.0 + 3.0) + 3.0 * std::sqrt(2.0 + 3.0);
  CHECK(mixed_l1_l2_norm(band, {2}) == doctest::Approx(expect));
  CHECK_THROWS_AS(mixed_l1_l2_norm(band, {3}), InvalidArgument);
}

TEST_CASE("cluster sets") {
  const DiscreteKernel g1{Grid::finite({1.0, 4.0}), Tensor(1, 2, std::vector<double>{1.0, 1.0})};
  const auto c1 = lil_cluster_set(g1);
  CHECK(c1.upper == doctest::Approx(std::sqrt(5.0)));
  CHECK(c1.lower == doctest::Approx(-std::sqrt(5.0)));
  CHECK(c1.degeneracy_order == 1);

  const DiscreteKernel diag{Grid::finite({1.0, 1.0}), Tensor(2, 2, std::vector<double>{2, 0, 0, -1})};
  const auto c2 = lil_cluster_set(diag);
  CHECK(c2.upper == doctest::Approx(2.0));
  CHECK(c2.lower == doctest::Approx(-1.0));

  const DiscreteKernel pos{Grid::finite({1.0, 1.0}), Tensor(2, 2, std::vector<double>{1, 0, 0, 1})};
  CHECK(lil_cluster_set(pos).lower == 0.0);  // hull with 0

  Rng rng = make_rng(27);
  for (int rep = 0; rep < 5; ++rep) {
    const Grid grid = pc_test::random_grid(5, 3.0, rng);
    const DiscreteKernel g{grid, pc_test::random_symmetric_tensor(2, 5, rng)};
    Eigen::MatrixXd m(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        m(i, j) = std::sqrt(grid.weights[static_cast<std::size_t>(i)] * grid.weights[static_cast<std::size_t>(j)]) *
                  g.values[static_cast<std::size_t>(i * 5 + j)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const auto c = lil_cluster_set(g);
    CHECK(c.upper == doctest::Approx(std::max(0.0, es.eigenvalues().maxCoeff())).epsilon(1e-8));
    CHECK(c.lower == doctest::Approx(std::min(0.0, es.eigenvalues().minCoeff())).epsilon(1e-8));
    const auto je = jacobi_eigen(std::vector<double>(m.data(), m.data() + 25), 5);
    CHECK(je.values.front() == doctest::Approx(es.eigenvalues().minCoeff()).epsilon(1e-10));
  }

  // Nonnegative kernel: m = 1 and the d = 1 extreme of g_1 bounds the d = 2 one.
  const DiscreteKernel nonneg{Grid::finite({0.5, 0.5, 0.5}), Tensor(2, 3, 1.0)};
  CHECK(degeneracy_order(nonneg) == 1);
  const DiscreteKernel spins{Grid::finite({0.5, 0.5}), Tensor(2, 2, std::vector<double>{1, -1, -1, 1})};
  CHECK(degeneracy_order(spins) == 2);
  CHECK(degeneracy_order(DiscreteKernel{Grid::finite({1.0}), Tensor(2, 1)}) == 0);

  const DiscreteKernel g3{Grid::finite({1.0, 1.0}), pc_test::random_symmetric_tensor(3, 2, rng)};
  const auto c3 = lil_cluster_set(g3);
  CHECK(c3.upper >= 0.0);
  CHECK(c3.upper <= partition_norm(g3, parse_partition(3, "{1}{2}{3}")) * (1 + 1e-8));
  CHECK(c3.lower == doctest::Approx(-c3.upper));
  CHECK_THROWS_AS(lil_cluster_set(DiscreteKernel{Grid::finite({1.0}), Tensor(4, 1, 1.0)}), SizeError);
}

TEST_CASE("bound curve csv") {
  std::ostringstream os;
  write_bound_curve_csv(os, {{1.0, 0.5, "k=0,J={1}"}});
  CHECK(os.str() == "u,bound,regime\r\n1,0.5,\"k=0,J={1}\"\r\n");
}
