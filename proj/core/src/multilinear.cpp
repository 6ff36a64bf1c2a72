#include "multilinear.hpp"

#include <cmath>

#include "poisson_chaos/error.hpp"

namespace poisson_chaos::detail {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void normalize(std::vector<double>& v) {
  const double n = norm2(v);
  if (n > 0.0) {
    for (double& x : v) x /= n;
  }
}

double BlockTensor::frobenius() const { return norm2(data); }

bool BlockTensor::is_zero() const {
  for (double v : data)
    if (v != 0.0) return false;
  return true;
}

void BlockTensor::contract_except(std::size_t skip, const std::vector<std::vector<double>>& phi,
                                  std::vector<double>& out) const {
  const std::size_t m = dims.size();
  out.assign(dims[skip], 0.0);
  std::vector<std::size_t> idx(m, 0);
  for (std::size_t f = 0; f < data.size(); ++f) {
    const double v = data[f];
    if (v != 0.0) {
      double p = v;
      for (std::size_t c = 0; c < m; ++c)
        if (c != skip) p *= phi[c][idx[c]];
      out[idx[skip]] += p;
    }
    for (std::size_t c = m; c-- > 0;) {
      if (++idx[c] < dims[c]) break;
      idx[c] = 0;
    }
  }
}

double BlockTensor::form(const std::vector<std::vector<double>>& phi) const {
  std::vector<double> v;
  contract_except(0, phi, v);
  double s = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) s += v[j] * phi[0][j];
  return s;
}

BlockTensor regroup(const Tensor& values, std::span<const double> weights, const Partition& partition) {
  const int d = values.order();
  partition.validate();
  if (partition.d != d || static_cast<int>(partition.support().size()) != d) {
    throw InvalidArgument("partition must cover every kernel argument");
  }
  const std::size_t R = values.side();
  if (weights.size() != R) throw InvalidArgument("weights do not match tensor side");
  std::vector<double> sw(R);
  for (std::size_t i = 0; i < R; ++i) sw[i] = std::sqrt(weights[i]);

  BlockTensor bt;
  for (const auto& b : partition.blocks) bt.dims.push_back(checked_power(R, static_cast<int>(b.size()), std::size_t{1} << 28));
  bt.data.assign(values.size(), 0.0);

  std::vector<std::size_t> idx(static_cast<std::size_t>(d));
  for (std::size_t f = 0; f < values.size(); ++f) {
    values.unflatten(f, idx);
    double scale = 1.0;
    for (std::size_t i : idx) scale *= sw[i];
    std::size_t out = 0;
    for (std::size_t b = 0; b < partition.blocks.size(); ++b) {
      std::size_t mode = 0;
      for (int e : partition.blocks[b]) mode = mode * R + idx[static_cast<std::size_t>(e - 1)];
      out = out * bt.dims[b] + mode;
    }
    bt.data[out] = values[f] * scale;
  }
  return bt;
}

}  // namespace poisson_chaos::detail
