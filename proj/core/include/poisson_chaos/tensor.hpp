#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace poisson_chaos {

// Dense cubic tensor: `order` axes of equal length `side`, row-major.
class Tensor {
 public:
  Tensor() = default;
  Tensor(int order, std::size_t side, double fill = 0.0);
  Tensor(int order, std::size_t side, std::vector<double> data);

  int order() const { return order_; }
  std::size_t side() const { return side_; }
  std::size_t size() const { return data_.size(); }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  double& operator[](std::size_t flat) { return data_[flat]; }
  double operator[](std::size_t flat) const { return data_[flat]; }

  double& at(std::span<const std::size_t> index);
  double at(std::span<const std::size_t> index) const;

  std::size_t flat_index(std::span<const std::size_t> index) const;
  void unflatten(std::size_t flat, std::span<std::size_t> index) const;

  double max_abs() const;
  double frobenius() const;
  bool is_zero() const;

  // True when two axis indices coincide.
  bool on_diagonal(std::size_t flat) const;
  bool is_symmetric(double tol = 0.0) const;

  // Contract the trailing axis against v; order drops by one.
  Tensor contract_last(std::span<const double> v) const;
  // Fix the leading `prefix.size()` indices.
  Tensor slice(std::span<const std::size_t> prefix) const;

  Tensor scaled(double c) const;

  bool operator==(const Tensor&) const = default;

 private:
  int order_ = 0;
  std::size_t side_ = 0;
  std::vector<double> data_;
};

// side^order with an overflow guard (throws SizeError past `cap`).
std::size_t checked_power(std::size_t side, int order, std::size_t cap);

// Average over all axis permutations.
Tensor symmetrize(const Tensor& t);

// All permutations of 0..n-1 in lexicographic order.
std::vector<std::vector<int>> permutations(int n);

double binomial(int n, int k);
double factorial(int n);

}  // namespace poisson_chaos
