#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "poisson_chaos/rng.hpp"

namespace poisson_chaos {

enum class SpaceKind { box, finite, torus };

std::string to_string(SpaceKind kind);

// Finite window (X, lambda) the process lives on.
//  - box:    [0, s_1] x ... x [0, s_N] with constant density c
//  - torus:  unit torus [0,1)^N with constant density c
//  - finite: atoms 0..R-1 with weights lambda_i
struct SpaceConfig {
  SpaceKind kind = SpaceKind::finite;
  int dimension = 0;
  std::vector<double> sides;
  double density = 0.0;
  std::vector<double> weights;

  static SpaceConfig box(std::vector<double> sides, double density);
  static SpaceConfig torus(int dimension, double density);
  static SpaceConfig finite(std::vector<double> weights);

  double total_mass() const;

  // Coordinates stored per point: N for box/torus, 0 for finite spaces.
  std::size_t location_dimension() const;

  // Throws InvalidConfiguration on negative/nonfinite weights or sizes.
  void validate() const;

  bool operator==(const SpaceConfig&) const = default;
};

// Realization of a time-homogeneous spatiotemporal process on X x [0, T],
// stored as parallel arrays sorted by arrival time.
struct SpatioTemporalSample {
  SpaceConfig space;
  double horizon = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> coords;       // size() * space.location_dimension()
  std::vector<std::int32_t> cells;  // finite spaces only
  std::vector<double> times;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  std::span<const double> location(std::size_t i) const;
  std::int32_t cell(std::size_t i) const { return cells[i]; }
};

struct MarkedSample {
  SpatioTemporalSample base;
  std::vector<double> marks;
  std::string mark_space;

  std::size_t size() const { return base.size(); }
};

// Draws a mark for the point at `location` (empty for finite spaces) / `cell`.
using MarkLaw = std::function<double(std::span<const double> location, std::int32_t cell, Rng& rng)>;

MarkLaw constant_mark(double value);
MarkLaw discrete_mark(std::vector<double> atoms, std::vector<double> probabilities);
// Mark +1 with probability p(x), -1 otherwise.
MarkLaw spin_mark(std::function<double(std::span<const double>, std::int32_t)> p_plus);

SpatioTemporalSample sample_process(const SpaceConfig& space, double horizon, std::uint64_t seed);

// Points with arrival time <= t; horizon becomes t.
SpatioTemporalSample restrict(const SpatioTemporalSample& sample, double t);

// Number of points that arrived by time t (closed interval).
std::size_t count_until(const SpatioTemporalSample& sample, double t);

MarkedSample mark_sample(const SpatioTemporalSample& sample, const MarkLaw& law, std::uint64_t seed,
                         std::string mark_space = "real");

// n (n-1) ... (n-d+1), saturating at UINT64_MAX.
std::uint64_t falling_factorial(std::uint64_t n, int d);

// Ordered d-tuples of pairwise distinct indices in [0, n), lexicographic.
class FactorialTuples {
 public:
  FactorialTuples(std::size_t n, int d);

  class iterator {
   public:
    using value_type = std::vector<std::size_t>;
    using difference_type = std::ptrdiff_t;
    using reference = const value_type&;
    using pointer = const value_type*;
    using iterator_category = std::input_iterator_tag;

    iterator() = default;
    reference operator*() const { return tuple_; }
    pointer operator->() const { return &tuple_; }
    iterator& operator++();
    void operator++(int) { ++*this; }
    bool operator==(const iterator& other) const { return done_ == other.done_; }

   private:
    friend class FactorialTuples;
    iterator(std::size_t n, int d);
    bool advance_from(int position);

    std::size_t n_ = 0;
    int d_ = 0;
    std::vector<std::size_t> tuple_;
    std::vector<char> used_;
    bool done_ = true;
  };

  iterator begin() const { return iterator(n_, d_); }
  iterator end() const { return iterator(); }
  std::uint64_t count() const { return falling_factorial(n_, d_); }

 private:
  std::size_t n_;
  int d_;
};

FactorialTuples factorial_tuples(std::size_t n, int d);

// Callback form used on hot paths; f receives std::span<const std::size_t>.
template <class F>
void for_each_factorial_tuple(std::size_t n, int d, F&& f) {
  std::vector<std::size_t> tuple(static_cast<std::size_t>(d));
  std::vector<char> used(n, 0);
  auto rec = [&](auto&& self, int pos) -> void {
    if (pos == d) {
      f(std::span<const std::size_t>(tuple));
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      used[i] = 1;
      tuple[static_cast<std::size_t>(pos)] = i;
      self(self, pos + 1);
      used[i] = 0;
    }
  };
  if (d >= 1 && static_cast<std::size_t>(d) <= n) rec(rec, 0);
}

}  // namespace poisson_chaos
