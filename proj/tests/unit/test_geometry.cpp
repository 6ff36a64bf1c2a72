#include <doctest.h>

#include <cmath>
#include <sstream>

#include "poisson_chaos/chaos.hpp"
#include "poisson_chaos/geometry.hpp"
#include "poisson_chaos/stats.hpp"

using namespace poisson_chaos;

namespace {

SpatioTemporalSample points(int dim, std::vector<double> coords) {
  SpatioTemporalSample s;
  s.space = SpaceConfig::torus(dim, 1.0);
  s.horizon = 1.0;
  s.coords = std::move(coords);
  for (std::size_t i = 0; i < s.coords.size() / static_cast<std::size_t>(dim); ++i) s.times.push_back(0.1 * (i + 1));
  return s;
}

bool same_graph(const GeometricGraph& a, const GeometricGraph& b) { return a.neighbors == b.neighbors; }

}  // namespace

TEST_CASE("closed-ball adjacency") {
  const auto s = points(1, {0.2, 0.45});
  CHECK(build_gilbert_graph(s, 1.0, 0.25, Metric::euclidean).edge_count() == 1);
  CHECK(build_gilbert_graph(s, 1.0, 0.2499, Metric::euclidean).edge_count() == 0);
  // wraps on the torus
  const auto w = points(1, {0.02, 0.97});
  CHECK(build_gilbert_graph(w, 1.0, 0.06, Metric::torus).has_edge(0, 1));
  CHECK_FALSE(build_gilbert_graph(w, 1.0, 0.06, Metric::euclidean).has_edge(0, 1));

  const auto one = points(2, {0.5, 0.5});
  const auto g1 = build_gilbert_graph(one, 1.0, 0.3, Metric::torus);
  CHECK(g1.vertices() == 1);
  CHECK(g1.edge_count() == 0);
  CHECK(build_gilbert_graph(one, 0.05, 0.3, Metric::torus).vertices() == 0);  // not yet arrived
}

TEST_CASE("bucket grid agrees with the naive graph") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto s = sample_process(SpaceConfig::torus(2, 100.0), 1.0, seed);
    for (double r : {0.03, 0.1, 0.3, 0.6}) {
      CHECK(same_graph(build_gilbert_graph(s, 1.0, r, Metric::torus), build_gilbert_graph_naive(s, 1.0, r, Metric::torus)));
      CHECK(same_graph(build_gilbert_graph(s, 0.5, r, Metric::euclidean),
                       build_gilbert_graph_naive(s, 0.5, r, Metric::euclidean)));
    }
  }
  const auto box = sample_process(SpaceConfig::box({3.0, 1.0}, 30.0), 1.0, 9);
  CHECK(same_graph(build_gilbert_graph(box, 1.0, 0.2, Metric::euclidean),
                   build_gilbert_graph_naive(box, 1.0, 0.2, Metric::euclidean)));
}

TEST_CASE("subgraph counts on a triangle") {
  const auto tri = points(2, {0.1, 0.1, 0.15, 0.1, 0.1, 0.15});
  const auto g = build_gilbert_graph(tri, 1.0, 0.2, Metric::torus);
  CHECK(count_subgraphs(g, Graph::named("K2")) == 3);
  CHECK(count_subgraphs(g, Graph::named("K3")) == 1);
  CHECK(count_subgraphs(g, Graph::named("path_2")) == 3);
  CHECK(count_subgraphs(g, Graph::named("K4")) == 0);
  CHECK(count_injective_homomorphisms(g, Graph::named("K3")) == 6);

  const auto empty = build_gilbert_graph(points(2, {}), 1.0, 0.2, Metric::torus);
  CHECK(count_subgraphs(empty, Graph::named("K3")) == 0);
}

TEST_CASE("edge count is half the K2 U-statistic") {
  const SubgraphKernel k2{Graph::named("K2"), 0.1, Metric::torus, 2};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto s = sample_process(SpaceConfig::torus(2, 80.0), 1.0, seed);
    const auto g = build_gilbert_graph(s, 1.0, 0.1, Metric::torus);
    CHECK(static_cast<double>(g.edge_count()) == ustat(k2, s, 1.0) / 2.0);
  }
}

TEST_CASE("expected edge count on the torus") {
  const double c = 50.0, r = 0.1;
  const std::size_t M = 400;
  std::vector<double> edges;
  for (std::size_t i = 0; i < M; ++i) {
    const auto s = sample_process(SpaceConfig::torus(2, c), 1.0, derive_seed(77, i));
    edges.push_back(static_cast<double>(build_gilbert_graph(s, 1.0, r, Metric::torus).edge_count()));
  }
  const double area = M_PI * r * r;
  const double mean = c * c * area / 2.0;
  const double var = mean + c * c * c * area * area;
  CHECK(std::abs(sample_moments(edges).mean - mean) <= 5.0 * std::sqrt(var / M));
}

TEST_CASE("edge list csv") {
  const auto g = build_gilbert_graph(points(1, {0.2, 0.3}), 1.0, 0.2, Metric::torus);
  std::ostringstream os;
  write_edge_list_csv(os, g);
  CHECK(os.str().find("0,1") != std::string::npos);
}
