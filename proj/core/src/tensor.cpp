#include "poisson_chaos/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "poisson_chaos/error.hpp"

namespace poisson_chaos {

namespace {
constexpr std::size_t kMaxEntries = std::size_t{1} << 28;
}

std::size_t checked_power(std::size_t side, int order, std::size_t cap) {
  if (order < 0) throw InvalidArgument("tensor order must be >= 0");
  std::size_t n = 1;
  for (int i = 0; i < order; ++i) {
    if (side != 0 && n > cap / side) throw SizeError("tensor too large");
    n *= side;
  }
  if (n > cap) throw SizeError("tensor too large");
  return n;
}

Tensor::Tensor(int order, std::size_t side, double fill)
    : order_(order), side_(side), data_(checked_power(side, order, kMaxEntries), fill) {}

Tensor::Tensor(int order, std::size_t side, std::vector<double> data)
    : order_(order), side_(side), data_(std::move(data)) {
  if (data_.size() != checked_power(side, order, kMaxEntries)) {
    throw InvalidArgument("tensor data length must be side^order");
  }
}

std::size_t Tensor::flat_index(std::span<const std::size_t> index) const {
  if (index.size() != static_cast<std::size_t>(order_)) throw InvalidArgument("tensor index arity mismatch");
  std::size_t flat = 0;
  for (std::size_t i : index) {
    if (i >= side_) throw RangeError("tensor index out of range");
    flat = flat * side_ + i;
  }
  return flat;
}

void Tensor::unflatten(std::size_t flat, std::span<std::size_t> index) const {
  for (int a = order_ - 1; a >= 0; --a) {
    index[static_cast<std::size_t>(a)] = flat % side_;
    flat /= side_;
  }
}

double& Tensor::at(std::span<const std::size_t> index) { return data_[flat_index(index)]; }
double Tensor::at(std::span<const std::size_t> index) const { return data_[flat_index(index)]; }

double Tensor::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Tensor::frobenius() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

bool Tensor::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return v == 0.0; });
}

bool Tensor::on_diagonal(std::size_t flat) const {
  std::size_t idx[8];
  if (order_ > 8) throw SizeError("order > 8");
  unflatten(flat, std::span<std::size_t>(idx, static_cast<std::size_t>(order_)));
  for (int a = 0; a < order_; ++a) {
    for (int b = a + 1; b < order_; ++b) {
      if (idx[a] == idx[b]) return true;
    }
  }
  return false;
}

bool Tensor::is_symmetric(double tol) const {
  if (order_ <= 1) return true;
  const auto perms = permutations(order_);
  std::vector<std::size_t> idx(static_cast<std::size_t>(order_)), p(idx.size());
  for (std::size_t f = 0; f < data_.size(); ++f) {
    unflatten(f, idx);
    for (const auto& perm : perms) {
      for (std::size_t a = 0; a < idx.size(); ++a) p[a] = idx[static_cast<std::size_t>(perm[a])];
      if (std::abs(data_[flat_index(p)] - data_[f]) > tol) return false;
    }
  }
  return true;
}

Tensor Tensor::contract_last(std::span<const double> v) const {
  if (order_ < 1) throw InvalidArgument("cannot contract an order-0 tensor");
  if (v.size() != side_) throw InvalidArgument("contraction vector length must equal side");
  Tensor out(order_ - 1, side_);
  const std::size_t rows = out.size();
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = data_.data() + r * side_;
    double s = 0.0;
    for (std::size_t j = 0; j < side_; ++j) s += row[j] * v[j];
    out.data_[r] = s;
  }
  return out;
}

Tensor Tensor::slice(std::span<const std::size_t> prefix) const {
  const int k = static_cast<int>(prefix.size());
  if (k > order_) throw InvalidArgument("slice prefix longer than order");
  std::size_t offset = 0;
  for (std::size_t i : prefix) {
    if (i >= side_) throw RangeError("slice index out of range");
    offset = offset * side_ + i;
  }
  Tensor out(order_ - k, side_);
  offset *= out.size();
  std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(offset), out.size(), out.data_.begin());
  return out;
}

Tensor Tensor::scaled(double c) const {
  Tensor out = *this;
  for (double& v : out.data_) v *= c;
  return out;
}

Tensor symmetrize(const Tensor& t) {
  if (t.order() <= 1 || t.is_symmetric(0.0)) return t;
  const auto perms = permutations(t.order());
  Tensor out(t.order(), t.side());
  std::vector<std::size_t> idx(static_cast<std::size_t>(t.order())), p(idx.size());
  std::vector<double> orbit(perms.size());
  const double inv = 1.0 / static_cast<double>(perms.size());
  for (std::size_t f = 0; f < t.size(); ++f) {
    t.unflatten(f, idx);
    for (std::size_t q = 0; q < perms.size(); ++q) {
      for (std::size_t a = 0; a < idx.size(); ++a) p[a] = idx[static_cast<std::size_t>(perms[q][a])];
      orbit[q] = t[t.flat_index(p)];
    }
    // Same summation order across an orbit, so the result is exactly symmetric.
    std::sort(orbit.begin(), orbit.end());
    double s = 0.0;
    for (double v : orbit) s += v;
    out[f] = s * inv;
  }
  return out;
}

std::vector<std::vector<int>> permutations(int n) {
  std::vector<int> p(static_cast<std::size_t>(std::max(n, 0)));
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace poisson_chaos
