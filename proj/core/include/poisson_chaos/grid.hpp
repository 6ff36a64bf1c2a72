#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "poisson_chaos/point_process.hpp"

namespace poisson_chaos {

// Axis-aligned regular cell layout over a box or the unit torus.
struct RegularLayout {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::size_t> cells_per_axis;
  bool periodic = false;

  bool operator==(const RegularLayout&) const = default;
};

// Weighted cells (w_i = lambda(cell i)) with representative midpoints.
// A grid may be a product of spatial cells and a finite mark alphabet; then
// cell index = spatial_index * mark_atoms.size() + mark_index and the mark
// is the last midpoint coordinate.
struct Grid {
  std::vector<double> weights;
  std::vector<double> midpoints;  // size() * dim
  int dim = 0;
  std::optional<RegularLayout> layout;
  std::vector<double> mark_atoms;

  std::size_t size() const { return weights.size(); }
  std::span<const double> midpoint(std::size_t i) const;
  double total_mass() const;
  std::size_t spatial_size() const { return mark_atoms.empty() ? size() : size() / mark_atoms.size(); }
  int spatial_dim() const { return mark_atoms.empty() ? dim : dim - 1; }

  // Abstract weighted atoms; midpoints optional (then dim = 0).
  static Grid finite(std::vector<double> weights, std::vector<double> midpoints = {}, int dim = 0);
  // Regular partition of a box/torus space; weights = density * cell volume.
  static Grid regular(const SpaceConfig& space, std::vector<std::size_t> cells_per_axis);
  static Grid regular(const SpaceConfig& space, std::size_t cells_per_axis);
  // [lo, hi] split into `cells` equal cells; weight = density * length.
  static Grid interval(double lo, double hi, std::size_t cells, double density = 1.0);
  // Product with a finite mark law: weights w_i * p_a, midpoint (x_i, atom_a).
  static Grid with_atoms(const Grid& base, std::vector<double> atoms, std::vector<double> probabilities);

  void validate() const;
};

// Finite space carrying exactly the grid weights (semi-discrete simulation).
SpaceConfig finite_space(const Grid& grid);

// Cell index of every sample point. Finite samples must carry the grid's
// weights; box/torus samples need a regular layout.
std::vector<std::int32_t> resolve_cells(const Grid& grid, const SpatioTemporalSample& sample);
std::vector<std::int32_t> resolve_cells(const Grid& grid, const MarkedSample& sample);

// Per-cell counts of points with arrival time <= t.
std::vector<double> cell_counts(std::span<const std::int32_t> cells, std::span<const double> times, double t,
                                std::size_t grid_size);

}  // namespace poisson_chaos
