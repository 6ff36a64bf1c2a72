#pragma once

// Internal: a kernel regrouped by partition blocks into an m-way tensor over
// unweighted coordinates, so that partition norms become ordinary injective
// norms on products of Euclidean unit spheres.

#include <cstddef>
#include <span>
#include <vector>

#include "poisson_chaos/kernels.hpp"
#include "poisson_chaos/partition.hpp"

namespace poisson_chaos::detail {

struct BlockTensor {
  std::vector<std::size_t> dims;  // one mode per block, size R^{|block|}
  std::vector<double> data;       // row-major over modes

  std::size_t modes() const { return dims.size(); }
  double frobenius() const;
  bool is_zero() const;

  // v[j] = sum over entries with mode `skip` = j of T * prod_{c != skip} phi_c.
  void contract_except(std::size_t skip, const std::vector<std::vector<double>>& phi, std::vector<double>& out) const;
  double form(const std::vector<std::vector<double>>& phi) const;
};

// Rescales by prod sqrt(w) and regroups axes by the blocks of `partition`
// (which must cover every axis of `values`, 1-based).
BlockTensor regroup(const Tensor& values, std::span<const double> weights, const Partition& partition);

double norm2(std::span<const double> v);
void normalize(std::vector<double>& v);

}  // namespace poisson_chaos::detail
