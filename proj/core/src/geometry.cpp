#include "poisson_chaos/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_map>

#include "poisson_chaos/error.hpp"
#include "poisson_chaos/io.hpp"

namespace poisson_chaos {

std::size_t GeometricGraph::edge_count() const {
  std::size_t s = 0;
  for (const auto& nb : neighbors) s += nb.size();
  return s / 2;
}

bool GeometricGraph::has_edge(std::uint32_t a, std::uint32_t b) const {
  const auto& nb = neighbors[a];
  return std::binary_search(nb.begin(), nb.end(), b);
}

namespace {

GeometricGraph empty_graph(const SpatioTemporalSample& sample, double t, double r, Metric metric) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("gilbert graph: r must be > 0");
  if (sample.space.kind == SpaceKind::finite) throw InvalidArgument("gilbert graph needs point locations");
  if (metric == Metric::torus && sample.space.kind != SpaceKind::torus) {
    throw InvalidArgument("gilbert graph: torus metric needs a torus sample");
  }
  if (!(t >= 0.0 && t <= sample.horizon)) throw RangeError("t must lie in [0, horizon]");
  GeometricGraph g;
  g.dim = sample.space.dimension;
  g.radius = r;
  g.metric = metric;
  const std::size_t n = count_until(sample, t);
  g.coords.assign(sample.coords.begin(), sample.coords.begin() + static_cast<std::ptrdiff_t>(n * static_cast<std::size_t>(g.dim)));
  g.neighbors.resize(n);
  return g;
}

}  // namespace

GeometricGraph build_gilbert_graph_naive(const SpatioTemporalSample& sample, double t, double r, Metric metric) {
  GeometricGraph g = empty_graph(sample, t, r, metric);
  const auto d = static_cast<std::size_t>(g.dim);
  const std::span<const double> c(g.coords);
  for (std::size_t i = 0; i < g.vertices(); ++i)
    for (std::size_t j = i + 1; j < g.vertices(); ++j)
      if (distance(metric, c.subspan(i * d, d), c.subspan(j * d, d)) <= r) {
        g.neighbors[i].push_back(static_cast<std::uint32_t>(j));
        g.neighbors[j].push_back(static_cast<std::uint32_t>(i));
      }
  for (auto& nb : g.neighbors) std::sort(nb.begin(), nb.end());
  return g;
}

GeometricGraph build_gilbert_graph(const SpatioTemporalSample& sample, double t, double r, Metric metric) {
  GeometricGraph g = empty_graph(sample, t, r, metric);
  const auto d = static_cast<std::size_t>(g.dim);
  const std::size_t n = g.vertices();
  if (n < 2) return g;
  const std::span<const double> c(g.coords);
  const bool periodic = metric == Metric::torus;

  // Buckets of side >= r per axis; with fewer than 3 buckets on a periodic
  // axis neighbor offsets would alias, so fall back to one bucket there.
  std::vector<double> lo(d), span(d);
  std::vector<long long> cells(d);
  for (std::size_t a = 0; a < d; ++a) {
    if (periodic) {
      lo[a] = 0.0;
      span[a] = 1.0;
    } else {
      double mn = c[a], mx = c[a];
      for (std::size_t i = 1; i < n; ++i) {
        mn = std::min(mn, c[i * d + a]);
        mx = std::max(mx, c[i * d + a]);
      }
      lo[a] = mn;
      span[a] = std::max(mx - mn, r);
    }
    long long k = static_cast<long long>(std::floor(span[a] / r));
    k = std::clamp(k, 1LL, 1LL << 10);
    if (periodic && k < 3) k = 1;
    cells[a] = k;
  }
  auto bucket_of = [&](std::size_t i, std::vector<long long>& b) {
    for (std::size_t a = 0; a < d; ++a) {
      long long x = static_cast<long long>(std::floor((c[i * d + a] - lo[a]) / span[a] * static_cast<double>(cells[a])));
      b[a] = std::clamp(x, 0LL, cells[a] - 1);
    }
  };
  auto flatten = [&](const std::vector<long long>& b) {
    long long f = 0;
    for (std::size_t a = 0; a < d; ++a) f = f * cells[a] + b[a];
    return f;
  };
  std::unordered_map<long long, std::vector<std::uint32_t>> buckets;
  std::vector<long long> b(d), nbk(d);
  for (std::size_t i = 0; i < n; ++i) {
    bucket_of(i, b);
    buckets[flatten(b)].push_back(static_cast<std::uint32_t>(i));
  }

  std::size_t offsets = 1;
  for (std::size_t a = 0; a < d; ++a) offsets *= cells[a] == 1 ? 1 : 3;
  for (std::size_t i = 0; i < n; ++i) {
    bucket_of(i, b);
    for (std::size_t o = 0; o < offsets; ++o) {
      std::size_t rem = o;
      bool valid = true;
      for (std::size_t a = 0; a < d; ++a) {
        if (cells[a] == 1) {
          nbk[a] = 0;
          continue;
        }
        long long x = b[a] + static_cast<long long>(rem % 3) - 1;
        rem /= 3;
        if (periodic) {
          x = (x + cells[a]) % cells[a];
        } else if (x < 0 || x >= cells[a]) {
          valid = false;
        }
        nbk[a] = x;
      }
      if (!valid) continue;
      auto it = buckets.find(flatten(nbk));
      if (it == buckets.end()) continue;
      for (std::uint32_t j : it->second) {
        if (j <= i) continue;
        if (distance(metric, c.subspan(i * d, d), c.subspan(static_cast<std::size_t>(j) * d, d)) <= r) {
          g.neighbors[i].push_back(j);
          g.neighbors[j].push_back(static_cast<std::uint32_t>(i));
        }
      }
    }
  }
  for (auto& nb : g.neighbors) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return g;
}

std::uint64_t count_injective_homomorphisms(const GeometricGraph& graph, const Graph& h) {
  if (!h.connected()) throw InvalidArgument("count_subgraphs: H must be connected");
  const int k = h.vertices;
  if (k < 2 || k > 5) throw InvalidArgument("count_subgraphs: unsupported H");
  const std::size_t n = graph.vertices();
  // BFS order of H so every later vertex has an earlier neighbor to extend from.
  std::vector<int> order{0};
  std::vector<char> placed(static_cast<std::size_t>(k), 0);
  placed[0] = 1;
  for (std::size_t q = 0; q < order.size(); ++q)
    for (int w = 0; w < k; ++w)
      if (!placed[static_cast<std::size_t>(w)] && h.adjacent(order[q], w)) {
        placed[static_cast<std::size_t>(w)] = 1;
        order.push_back(w);
      }
  std::vector<int> anchor(static_cast<std::size_t>(k), -1);
  std::vector<std::vector<int>> back(static_cast<std::size_t>(k));  // earlier neighbors
  for (std::size_t p = 1; p < order.size(); ++p) {
    for (std::size_t q = 0; q < p; ++q) {
      if (h.adjacent(order[p], order[q])) {
        if (anchor[p] < 0) anchor[p] = static_cast<int>(q);
        back[p].push_back(static_cast<int>(q));
      }
    }
  }
  std::vector<std::uint32_t> image(static_cast<std::size_t>(k));
  std::uint64_t count = 0;
  auto rec = [&](auto&& self, std::size_t p) -> void {
    if (p == order.size()) {
      ++count;
      return;
    }
    for (std::uint32_t v : graph.neighbors[image[static_cast<std::size_t>(anchor[p])]]) {
      bool ok = true;
      for (std::size_t q = 0; q < p && ok; ++q) ok = image[q] != v;
      for (int q : back[p]) {
        if (!ok) break;
        ok = graph.has_edge(image[static_cast<std::size_t>(q)], v);
      }
      if (!ok) continue;
      image[p] = v;
      self(self, p + 1);
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    image[0] = static_cast<std::uint32_t>(v);
    rec(rec, 1);
  }
  return count;
}

std::uint64_t count_subgraphs(const GeometricGraph& graph, const Graph& h) {
  const auto aut = static_cast<std::uint64_t>(automorphism_count(h));
  const std::uint64_t hom = count_injective_homomorphisms(graph, h);
  if (hom % aut != 0) throw IdentityViolation("injective homomorphism count not divisible by Aut(H)");
  return hom / aut;
}

void write_edge_list_csv(std::ostream& os, const GeometricGraph& graph) {
  write_csv_row(os, {"source", "target"});
  for (std::size_t i = 0; i < graph.vertices(); ++i)
    for (std::uint32_t j : graph.neighbors[i])
      if (j > i) write_csv_row(os, {std::to_string(i), std::to_string(j)});
}

}  // namespace poisson_chaos
