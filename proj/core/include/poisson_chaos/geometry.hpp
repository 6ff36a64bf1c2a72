#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "poisson_chaos/kernels.hpp"
#include "poisson_chaos/point_process.hpp"

namespace poisson_chaos {

// Gilbert graph on the points of a sample arrived by time t.
struct GeometricGraph {
  std::vector<double> coords;  // n * dim
  int dim = 0;
  double radius = 0.0;
  Metric metric = Metric::torus;
  std::vector<std::vector<std::uint32_t>> neighbors;  // sorted

  std::size_t vertices() const { return neighbors.size(); }
  std::size_t edge_count() const;
  bool has_edge(std::uint32_t a, std::uint32_t b) const;
};

// Bucket grid of cell size >= r; exact closed-ball adjacency.
GeometricGraph build_gilbert_graph(const SpatioTemporalSample& sample, double t, double r, Metric metric);
// O(n^2) reference used for cross-checks.
GeometricGraph build_gilbert_graph_naive(const SpatioTemporalSample& sample, double t, double r, Metric metric);

// Injective homomorphisms of H into the graph.
std::uint64_t count_injective_homomorphisms(const GeometricGraph& graph, const Graph& h);
// Copies of H: injective homomorphisms / Aut(H). H in K2..K4, path_1..3, star_1..4.
std::uint64_t count_subgraphs(const GeometricGraph& graph, const Graph& h);

void write_edge_list_csv(std::ostream& os, const GeometricGraph& graph);

}  // namespace poisson_chaos
