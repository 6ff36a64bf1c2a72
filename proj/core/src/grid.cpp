#include "poisson_chaos/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "poisson_chaos/error.hpp"

namespace poisson_chaos {

std::span<const double> Grid::midpoint(std::size_t i) const {
  const auto d = static_cast<std::size_t>(dim);
  return std::span<const double>(midpoints).subspan(i * d, d);
}

double Grid::total_mass() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

void Grid::validate() const {
  if (weights.empty()) throw InvalidConfiguration("grid: no cells");
  for (double w : weights) {
    if (!std::isfinite(w) || w <= 0.0) throw InvalidConfiguration("grid: cell weights must be finite and > 0");
  }
  if (dim < 0 || midpoints.size() != weights.size() * static_cast<std::size_t>(dim)) {
    throw InvalidConfiguration("grid: midpoints must hold dim coordinates per cell");
  }
  if (!mark_atoms.empty() && weights.size() % mark_atoms.size() != 0) {
    throw InvalidConfiguration("grid: mark product size mismatch");
  }
}

Grid Grid::finite(std::vector<double> weights, std::vector<double> midpoints, int dim) {
  Grid g;
  g.weights = std::move(weights);
  g.midpoints = std::move(midpoints);
  g.dim = dim;
  g.validate();
  return g;
}

Grid Grid::regular(const SpaceConfig& space, std::vector<std::size_t> cells_per_axis) {
  if (space.kind == SpaceKind::finite) throw InvalidConfiguration("grid: regular layout needs a box or torus");
  space.validate();
  if (cells_per_axis.size() != static_cast<std::size_t>(space.dimension)) {
    throw InvalidConfiguration("grid: one cell count per axis");
  }
  if (space.density <= 0.0) throw InvalidConfiguration("grid: density must be > 0");
  RegularLayout layout;
  layout.periodic = space.kind == SpaceKind::torus;
  layout.lower.assign(cells_per_axis.size(), 0.0);
  layout.upper = space.sides;
  layout.cells_per_axis = cells_per_axis;

  std::size_t total = 1;
  double volume = space.density;
  for (std::size_t a = 0; a < cells_per_axis.size(); ++a) {
    if (cells_per_axis[a] == 0) throw InvalidConfiguration("grid: cell counts must be >= 1");
    total *= cells_per_axis[a];
    volume *= space.sides[a] / static_cast<double>(cells_per_axis[a]);
  }

  Grid g;
  g.dim = space.dimension;
  g.weights.assign(total, volume);
  g.midpoints.resize(total * cells_per_axis.size());
  std::vector<std::size_t> idx(cells_per_axis.size(), 0);
  for (std::size_t c = 0; c < total; ++c) {
    std::size_t rem = c;
    for (std::size_t a = cells_per_axis.size(); a-- > 0;) {
      idx[a] = rem % cells_per_axis[a];
      rem /= cells_per_axis[a];
    }
    for (std::size_t a = 0; a < idx.size(); ++a) {
      const double h = space.sides[a] / static_cast<double>(cells_per_axis[a]);
      g.midpoints[c * idx.size() + a] = (static_cast<double>(idx[a]) + 0.5) * h;
    }
  }
  g.layout = std::move(layout);
  g.validate();
  return g;
}

Grid Grid::regular(const SpaceConfig& space, std::size_t cells_per_axis) {
  return regular(space, std::vector<std::size_t>(static_cast<std::size_t>(std::max(space.dimension, 0)), cells_per_axis));
}

Grid Grid::interval(double lo, double hi, std::size_t cells, double density) {
  if (!(hi > lo) || cells == 0 || !(density > 0.0)) throw InvalidConfiguration("grid: bad interval");
  Grid g;
  g.dim = 1;
  const double h = (hi - lo) / static_cast<double>(cells);
  g.weights.assign(cells, h * density);
  g.midpoints.resize(cells);
  for (std::size_t i = 0; i < cells; ++i) g.midpoints[i] = lo + (static_cast<double>(i) + 0.5) * h;
  g.layout = RegularLayout{{lo}, {hi}, {cells}, false};
  g.validate();
  return g;
}

Grid Grid::with_atoms(const Grid& base, std::vector<double> atoms, std::vector<double> probabilities) {
  if (!base.mark_atoms.empty()) throw InvalidConfiguration("grid: already marked");
  if (atoms.empty() || atoms.size() != probabilities.size()) {
    throw InvalidConfiguration("grid: atoms and probabilities must be nonempty and aligned");
  }
  const double psum = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
  if (std::abs(psum - 1.0) > 1e-12) throw InvalidConfiguration("grid: mark probabilities must sum to 1");
  Grid g;
  g.dim = base.dim + 1;
  g.layout = base.layout;
  g.mark_atoms = atoms;
  const std::size_t a = atoms.size();
  g.weights.resize(base.size() * a);
  g.midpoints.resize(g.weights.size() * static_cast<std::size_t>(g.dim));
  for (std::size_t i = 0; i < base.size(); ++i) {
    for (std::size_t j = 0; j < a; ++j) {
      const std::size_t c = i * a + j;
      g.weights[c] = base.weights[i] * probabilities[j];
      auto m = base.midpoint(i);
      std::copy(m.begin(), m.end(), g.midpoints.begin() + static_cast<std::ptrdiff_t>(c * static_cast<std::size_t>(g.dim)));
      g.midpoints[c * static_cast<std::size_t>(g.dim) + static_cast<std::size_t>(base.dim)] = atoms[j];
    }
  }
  g.validate();
  return g;
}

SpaceConfig finite_space(const Grid& grid) { return SpaceConfig::finite(grid.weights); }

namespace {

std::vector<std::int32_t> spatial_cells(const Grid& grid, const SpatioTemporalSample& sample) {
  const std::size_t n = sample.size();
  std::vector<std::int32_t> out(n);
  const std::size_t spatial = grid.spatial_size();
  if (sample.space.kind == SpaceKind::finite) {
    const auto& w = sample.space.weights;
    bool match = w.size() == spatial;
    // The sample's atoms must be the grid's spatial cells (marginal weights).
    for (std::size_t i = 0; match && i < spatial; ++i) {
      double cell_mass = 0.0;
      const std::size_t a = grid.mark_atoms.empty() ? 1 : grid.mark_atoms.size();
      for (std::size_t j = 0; j < a; ++j) cell_mass += grid.weights[i * a + j];
      match = std::abs(cell_mass - w[i]) <= 1e-12 * std::max(1.0, std::abs(w[i]));
    }
    if (!match) throw InvalidConfiguration("cell membership: sample atoms do not match grid weights");
    for (std::size_t i = 0; i < n; ++i) out[i] = sample.cells[i];
    return out;
  }
  if (!grid.layout) throw InvalidConfiguration("cell membership: grid has no regular layout");
  const auto& L = *grid.layout;
  const std::size_t dim = sample.space.location_dimension();
  if (dim != L.cells_per_axis.size()) throw InvalidConfiguration("cell membership: dimension mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    auto x = sample.location(i);
    std::size_t flat = 0;
    for (std::size_t a = 0; a < dim; ++a) {
      const double span = L.upper[a] - L.lower[a];
      double rel = (x[a] - L.lower[a]) / span;
      if (L.periodic) rel -= std::floor(rel);
      if (rel < 0.0 || rel > 1.0) throw InvalidConfiguration("cell membership: point outside grid window");
      auto c = static_cast<std::size_t>(rel * static_cast<double>(L.cells_per_axis[a]));
      c = std::min(c, L.cells_per_axis[a] - 1);
      flat = flat * L.cells_per_axis[a] + c;
    }
    out[i] = static_cast<std::int32_t>(flat);
  }
  return out;
}

}  // namespace

std::vector<std::int32_t> resolve_cells(const Grid& grid, const SpatioTemporalSample& sample) {
  if (!grid.mark_atoms.empty()) throw InvalidConfiguration("cell membership: marked grid needs a marked sample");
  return spatial_cells(grid, sample);
}

std::vector<std::int32_t> resolve_cells(const Grid& grid, const MarkedSample& sample) {
  if (grid.mark_atoms.empty()) return spatial_cells(grid, sample.base);
  auto cells = spatial_cells(grid, sample.base);
  const std::size_t a = grid.mark_atoms.size();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto it = std::find(grid.mark_atoms.begin(), grid.mark_atoms.end(), sample.marks[i]);
    if (it == grid.mark_atoms.end()) throw InvalidConfiguration("cell membership: mark not among grid atoms");
    cells[i] = static_cast<std::int32_t>(static_cast<std::size_t>(cells[i]) * a +
                                         static_cast<std::size_t>(it - grid.mark_atoms.begin()));
  }
  return cells;
}

std::vector<double> cell_counts(std::span<const std::int32_t> cells, std::span<const double> times, double t,
                                std::size_t grid_size) {
  std::vector<double> counts(grid_size, 0.0);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (times[i] > t) break;  // sorted by arrival
    const auto c = static_cast<std::size_t>(cells[i]);
    if (c >= grid_size) throw InvalidConfiguration("cell membership: cell id out of range");
    counts[c] += 1.0;
  }
  return counts;
}

}  // namespace poisson_chaos
