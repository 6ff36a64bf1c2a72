#include <doctest.h>

#include <cmath>
#include "json.hpp"

#include "poisson_chaos/error.hpp"
#include "poisson_chaos/norms.hpp"
#include "../support.hpp"

using namespace poisson_chaos;

namespace {

DiscreteKernel unit(int d, std::size_t side, std::vector<double> values) {
  return {Grid::finite(std::vector<double>(side, 1.0)), Tensor(d, side, std::move(values))};
}

Partition P(int d, const char* s) { return parse_partition(d, s); }

}  // namespace

TEST_CASE("partitions") {
  CHECK(P(3, "{1,2}{3}").to_string() == "{1,2}{3}");
  CHECK(Partition{2, {}}.to_string() == "{}");
  CHECK(P(3, "{3}{1,2}").shape() == std::vector<int>{2, 1});
  CHECK_THROWS_AS(P(2, "{1,3}"), InvalidArgument);
  CHECK_THROWS_AS(P(3, "{1,2}{2}"), InvalidArgument);
  CHECK_THROWS_AS(P(3, "{1"), InvalidArgument);
  CHECK(enumerate_partitions(4, range_set(1, 4)).size() == 15);  // Bell(4)
  CHECK(enumerate_partitions(3, {}).size() == 1);
  long long total = 0;
  for (const auto& c : shape_classes(4, range_set(1, 4))) total += c.multiplicity;
  CHECK(total == 15);
  CHECK(shape_classes(3, range_set(1, 3)).front().representative.size() == 1);
}

TEST_CASE("partition norm examples") {
  for (std::size_t n : {2u, 3u, 4u}) {
    std::vector<double> id(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) id[i * n + i] = 1.0;
    const auto g = unit(2, n, id);
    CHECK(partition_norm(g, P(2, "{1}{2}")) == doctest::Approx(1.0));
    CHECK(partition_norm(g, P(2, "{1,2}")) == doctest::Approx(std::sqrt(static_cast<double>(n))));
  }
  const std::vector<double> u{1.0, 2.0, -1.0}, v{0.5, -3.0, 2.0};
  std::vector<double> uv;
  for (double a : u)
    for (double b : v) uv.push_back(a * b);
  const auto r1 = unit(2, 3, uv);
  // not symmetric; the norm does not need symmetry
  CHECK(partition_norm(r1, P(2, "{1}{2}")) == doctest::Approx(std::sqrt(6.0) * std::sqrt(13.25)));
  CHECK_THROWS_AS(partition_norm(r1, P(3, "{1}{2}{3}")), InvalidArgument);
  CHECK_THROWS_AS(partition_norm(r1, P(2, "{1}")), InvalidArgument);
}

TEST_CASE("weights enter as the L2(lambda) inner product") {
  // g = 1 on a single cell of weight w: ||g||_2 = w^{d/2}, and so is every partition norm
  const DiscreteKernel g{Grid::finite({4.0}), Tensor(2, 1, 1.0)};
  CHECK(partition_norm(g, P(2, "{1}{2}")) == doctest::Approx(4.0));
  CHECK(partition_norm(g, P(2, "{1,2}")) == doctest::Approx(4.0));
}

TEST_CASE("brute force oracle examples") {
  CHECK(brute_force_norm(unit(2, 2, {3, 0, 0, 1}), P(2, "{1}{2}")) == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(brute_force_norm(unit(3, 2, std::vector<double>(8, 1.0)), P(3, "{1}{2}{3}")) ==
        doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-6));
  Rng rng = make_rng(3);
  const DiscreteKernel g{Grid::finite({1, 2, 3}), pc_test::random_symmetric_tensor(3, 3, rng)};
  CHECK(brute_force_norm(g, P(3, "{1,2,3}")) == doctest::Approx(l2_norm(g)));
  CHECK(partition_norm(g, P(3, "{1}{2}{3}")) == doctest::Approx(brute_force_norm(g, P(3, "{1}{2}{3}"))).epsilon(1e-4));
  const DiscreteKernel huge{Grid::finite(std::vector<double>(5, 1.0)), Tensor(4, 5, 1.0)};
  CHECK_THROWS_AS(brute_force_norm(huge, P(4, "{1}{2}{3}{4}")), SizeError);
}

TEST_CASE("conditional norms") {
  Rng rng = make_rng(4);
  const DiscreteKernel g{Grid::finite({1, 1, 1}), pc_test::random_symmetric_tensor(3, 3, rng)};
  CHECK(conditional_norm_sup(g, 3, Partition{3, {}}) == doctest::Approx(g.values.max_abs()));
  CHECK(conditional_norm_sup(g, 0, P(3, "{1}{2,3}")) == doctest::Approx(partition_norm(g, P(3, "{1}{2,3}"))));

  // banded 0/1 with m = 3 ones per row (circulant)
  const std::size_t n = 6;
  std::vector<double> band(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    band[i * n + i] = 1.0;
    band[i * n + (i + 1) % n] = 1.0;
    band[i * n + (i + n - 1) % n] = 1.0;
  }
  CHECK(conditional_norm_sup(unit(2, n, band), 1, P(2, "{2}")) == doctest::Approx(std::sqrt(3.0)));

  const DiscreteKernel zero{Grid::finite({1, 1}), Tensor(3, 2)};
  for (int k = 0; k <= 3; ++k)
    for (const auto& c : shape_classes(3, range_set(k + 1, 3))) CHECK(conditional_norm_sup(zero, k, c.representative) == 0.0);
  CHECK_THROWS_AS(conditional_norm_sup(g, 1, P(3, "{1}{2,3}")), InvalidArgument);
}

TEST_CASE("norm tables") {
  const DiscreteKernel g1{Grid::finite({1.0, 2.0}), Tensor(1, 2, std::vector<double>{3.0, -1.0})};
  const auto t1 = build_norm_table(g1);
  CHECK(t1.entries.size() == 2);
  CHECK(t1.find("0/{1}")->value == doctest::Approx(std::sqrt(9.0 + 2.0)));
  CHECK(t1.find("1/{}")->value == 3.0);

  Rng rng = make_rng(5);
  const DiscreteKernel g2{Grid::finite({1, 2, 0.5}), pc_test::random_symmetric_tensor(2, 3, rng)};
  const auto t2 = build_norm_table(g2);
  std::vector<std::string> keys;
  for (const auto& e : t2.entries) keys.push_back(e.key);
  CHECK(keys == std::vector<std::string>{"0/{1,2}", "0/{1}{2}", "1/{2}", "2/{}"});
  CHECK(t2.l2 == doctest::Approx(l2_norm(g2)));
  CHECK(t2.B.size() == 3);
  CHECK(t2.B[0] == doctest::Approx(t2.l2));

  const auto j = nlohmann::json::parse(t2.to_json());
  CHECK(j["entries"].contains("1/{2}"));
  CHECK(j["order"] == 2);

  const DiscreteKernel g5{Grid::finite({1, 1}), Tensor(5, 2, 1.0)};
  CHECK_THROWS_AS(build_norm_table(g5), SizeError);
}

TEST_CASE("norm invariants on random tensors") {
  Rng rng = make_rng(6);
  for (int rep = 0; rep < 10; ++rep) {
    const DiscreteKernel g{pc_test::random_grid(3, 3.0, rng), pc_test::random_symmetric_tensor(3, 3, rng)};
    const double fine = partition_norm(g, P(3, "{1}{2}{3}"));
    const double mid = partition_norm(g, P(3, "{1,2}{3}"));
    const double full = partition_norm(g, P(3, "{1,2,3}"));
    CHECK(fine <= mid + 1e-6);
    CHECK(mid <= full + 1e-8);
    CHECK(full == doctest::Approx(l2_norm(g)));
    const DiscreteKernel scaled{g.grid, g.values.scaled(-2.5)};
    CHECK(partition_norm(scaled, P(3, "{1}{2}{3}")) == doctest::Approx(2.5 * fine).epsilon(1e-10));
    const auto det = partition_norm_detailed(g, P(3, "{1}{2}{3}"));
    CHECK(det.max_decrease <= 1e-12 * std::max(1.0, det.value));
    const auto two = partition_norm_detailed(g, P(3, "{1,2}{3}"));
    CHECK(two.power_iteration >= 0.0);
    CHECK(two.power_iteration == doctest::Approx(two.value).epsilon(1e-6));
  }
  const DiscreteKernel zero{Grid::finite({1, 1}), Tensor(2, 2)};
  CHECK(partition_norm_detailed(zero, P(2, "{1}{2}")).sweeps == 0);
}

TEST_CASE("subgraph ball quantities") {
  const auto q = subgraph_bound_quantities(SpaceConfig::torus(2, 1.0), 0.1, 2);
  CHECK(q.A[1] == doctest::Approx(M_PI * 0.01));
  CHECK(q.B == doctest::Approx(M_PI * 0.01));
  CHECK(q.A[0] == doctest::Approx(1.0));
  const auto box = subgraph_bound_quantities(SpaceConfig::box({1.0}, 1.0), 0.1, 1, 200);
  CHECK(box.A[1] == doctest::Approx(0.2 - 0.01).epsilon(1e-3));
  CHECK(box.B == doctest::Approx(0.2));
  const auto box2 = subgraph_bound_quantities(SpaceConfig::box({1.0, 1.0}, 1.0), 0.1, 1, 64);
  CHECK(box2.B == doctest::Approx(M_PI * 0.01).epsilon(0.02));
  CHECK_THROWS_AS(subgraph_bound_quantities(SpaceConfig::torus(2, 1.0), 0.0, 1), InvalidArgument);
  CHECK_THROWS_AS(subgraph_bound_quantities(SpaceConfig::torus(2, 1.0), 0.6, 1), DomainError);
}
