#include "poisson_chaos/point_process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "poisson_chaos/error.hpp"

namespace poisson_chaos {

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::box: return "box";
    case SpaceKind::finite: return "finite";
    case SpaceKind::torus: return "torus";
  }
  return "unknown";
}

SpaceConfig SpaceConfig::box(std::vector<double> sides, double density) {
  SpaceConfig s;
  s.kind = SpaceKind::box;
  s.dimension = static_cast<int>(sides.size());
  s.sides = std::move(sides);
  s.density = density;
  s.validate();
  return s;
}

SpaceConfig SpaceConfig::torus(int dimension, double density) {
  SpaceConfig s;
  s.kind = SpaceKind::torus;
  s.dimension = dimension;
  s.sides.assign(static_cast<std::size_t>(std::max(dimension, 0)), 1.0);
  s.density = density;
  s.validate();
  return s;
}

SpaceConfig SpaceConfig::finite(std::vector<double> weights) {
  SpaceConfig s;
  s.kind = SpaceKind::finite;
  s.weights = std::move(weights);
  s.validate();
  return s;
}

double SpaceConfig::total_mass() const {
  switch (kind) {
    case SpaceKind::finite: return std::accumulate(weights.begin(), weights.end(), 0.0);
    case SpaceKind::torus: return density;
    case SpaceKind::box: {
      double v = density;
      for (double s : sides) v *= s;
      return v;
    }
  }
  return 0.0;
}

std::size_t SpaceConfig::location_dimension() const {
  return kind == SpaceKind::finite ? 0 : static_cast<std::size_t>(dimension);
}

void SpaceConfig::validate() const {
  if (kind == SpaceKind::finite) {
    for (double w : weights) {
      if (!std::isfinite(w) || w < 0.0) throw InvalidConfiguration("finite space: weights must be finite and >= 0");
    }
  } else {
    if (dimension < 1) throw InvalidConfiguration("space dimension must be >= 1");
    if (!std::isfinite(density) || density < 0.0) throw InvalidConfiguration("space density must be finite and >= 0");
    if (sides.size() != static_cast<std::size_t>(dimension)) throw InvalidConfiguration("box: one side length per dimension");
    for (double s : sides) {
      if (!std::isfinite(s) || s <= 0.0) throw InvalidConfiguration("box: side lengths must be finite and > 0");
    }
    if (kind == SpaceKind::torus && std::any_of(sides.begin(), sides.end(), [](double s) { return s != 1.0; })) {
      throw InvalidConfiguration("torus: sides are fixed to 1");
    }
  }
  if (!std::isfinite(total_mass())) throw InvalidConfiguration("total mass must be finite");
}

std::span<const double> SpatioTemporalSample::location(std::size_t i) const {
  const std::size_t dim = space.location_dimension();
  return std::span<const double>(coords).subspan(i * dim, dim);
}

SpatioTemporalSample sample_process(const SpaceConfig& space, double horizon, std::uint64_t seed) {
  if (!std::isfinite(horizon) || horizon <= 0.0) throw InvalidConfiguration("horizon T must be finite and > 0");
  space.validate();

  SpatioTemporalSample out;
  out.space = space;
  out.horizon = horizon;
  out.seed = seed;

  const double mean = horizon * space.total_mass();
  if (!std::isfinite(mean)) throw InvalidConfiguration("T * total_mass must be finite");
  if (mean <= 0.0) return out;

  Rng rng = make_rng(seed);
  std::poisson_distribution<long long> count_dist(mean);
  const auto n = static_cast<std::size_t>(count_dist(rng));

  const std::size_t dim = space.location_dimension();
  std::vector<double> coords(n * dim);
  std::vector<std::int32_t> cells;
  std::vector<double> times(n);

  if (space.kind == SpaceKind::finite) {
    cells.resize(n);
    std::discrete_distribution<std::int32_t> cell_dist(space.weights.begin(), space.weights.end());
    for (std::size_t i = 0; i < n; ++i) cells[i] = cell_dist(rng);
  } else {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t a = 0; a < dim; ++a) coords[i * dim + a] = unit(rng) * space.sides[a];
    }
  }
  std::uniform_real_distribution<double> arrival(0.0, horizon);
  for (auto& t : times) t = arrival(rng);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });

  out.times.resize(n);
  out.coords.resize(n * dim);
  if (!cells.empty()) out.cells.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = order[k];
    out.times[k] = times[i];
    for (std::size_t a = 0; a < dim; ++a) out.coords[k * dim + a] = coords[i * dim + a];
    if (!cells.empty()) out.cells[k] = cells[i];
  }
  return out;
}

std::size_t count_until(const SpatioTemporalSample& sample, double t) {
  return static_cast<std::size_t>(std::upper_bound(sample.times.begin(), sample.times.end(), t) - sample.times.begin());
}

SpatioTemporalSample restrict(const SpatioTemporalSample& sample, double t) {
  if (!(t >= 0.0 && t <= sample.horizon)) throw RangeError("restrict: t must lie in [0, horizon]");
  const std::size_t keep = count_until(sample, t);
  const std::size_t dim = sample.space.location_dimension();
  SpatioTemporalSample out;
  out.space = sample.space;
  out.horizon = t;
  out.seed = sample.seed;
  out.times.assign(sample.times.begin(), sample.times.begin() + static_cast<std::ptrdiff_t>(keep));
  out.coords.assign(sample.coords.begin(), sample.coords.begin() + static_cast<std::ptrdiff_t>(keep * dim));
  if (!sample.cells.empty()) {
    out.cells.assign(sample.cells.begin(), sample.cells.begin() + static_cast<std::ptrdiff_t>(keep));
  }
  return out;
}

MarkLaw constant_mark(double value) {
  return [value](std::span<const double>, std::int32_t, Rng&) { return value; };
}

MarkLaw discrete_mark(std::vector<double> atoms, std::vector<double> probabilities) {
  if (atoms.empty() || atoms.size() != probabilities.size()) {
    throw InvalidArgument("discrete_mark: atoms and probabilities must be nonempty and aligned");
  }
  for (double p : probabilities) {
    if (!std::isfinite(p) || p < 0.0) throw InvalidArgument("discrete_mark: probabilities must be >= 0");
  }
  return [atoms = std::move(atoms), probabilities = std::move(probabilities)](std::span<const double>, std::int32_t,
                                                                             Rng& rng) {
    std::discrete_distribution<std::size_t> pick(probabilities.begin(), probabilities.end());
    return atoms[pick(rng)];
  };
}

MarkLaw spin_mark(std::function<double(std::span<const double>, std::int32_t)> p_plus) {
  return [p_plus = std::move(p_plus)](std::span<const double> x, std::int32_t cell, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    return unit(rng) < p_plus(x, cell) ? 1.0 : -1.0;
  };
}

MarkedSample mark_sample(const SpatioTemporalSample& sample, const MarkLaw& law, std::uint64_t seed,
                         std::string mark_space) {
  MarkedSample out;
  out.base = sample;
  out.mark_space = std::move(mark_space);
  out.marks.resize(sample.size());
  Rng rng = make_rng(seed);
  const bool finite = sample.space.kind == SpaceKind::finite;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    out.marks[i] = law(sample.location(i), finite ? sample.cell(i) : -1, rng);
  }
  return out;
}

std::uint64_t falling_factorial(std::uint64_t n, int d) {
  if (d < 0) return 0;
  std::uint64_t acc = 1;
  for (int j = 0; j < d; ++j) {
    if (n < static_cast<std::uint64_t>(j) + 1) return 0;
    const std::uint64_t factor = n - static_cast<std::uint64_t>(j);
    if (acc > std::numeric_limits<std::uint64_t>::max() / factor) return std::numeric_limits<std::uint64_t>::max();
    acc *= factor;
  }
  return acc;
}

FactorialTuples::FactorialTuples(std::size_t n, int d) : n_(n), d_(d) {
  if (d < 1) throw InvalidArgument("factorial_tuples: d must be >= 1");
}

FactorialTuples factorial_tuples(std::size_t n, int d) { return FactorialTuples(n, d); }

FactorialTuples::iterator::iterator(std::size_t n, int d)
    : n_(n), d_(d), tuple_(static_cast<std::size_t>(d)), used_(n, 0), done_(false) {
  if (static_cast<std::size_t>(d) > n) {
    done_ = true;
    return;
  }
  for (int j = 0; j < d; ++j) {
    tuple_[static_cast<std::size_t>(j)] = static_cast<std::size_t>(j);
    used_[static_cast<std::size_t>(j)] = 1;
  }
}

// Smallest completion of positions [position, d) using unused indices.
bool FactorialTuples::iterator::advance_from(int position) {
  for (int p = position; p < d_; ++p) {
    std::size_t i = 0;
    while (i < n_ && used_[i]) ++i;
    if (i == n_) return false;
    tuple_[static_cast<std::size_t>(p)] = i;
    used_[i] = 1;
  }
  return true;
}

FactorialTuples::iterator& FactorialTuples::iterator::operator++() {
  if (done_) return *this;
  for (int p = d_ - 1; p >= 0; --p) {
    const auto up = static_cast<std::size_t>(p);
    used_[tuple_[up]] = 0;
    std::size_t next = tuple_[up] + 1;
    while (next < n_ && used_[next]) ++next;
    if (next < n_) {
      tuple_[up] = next;
      used_[next] = 1;
      if (advance_from(p + 1)) return *this;
      // n >= d guarantees a completion always exists here.
    }
  }
  done_ = true;
  return *this;
}

}  // namespace poisson_chaos
