#include "poisson_chaos/norms.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "json.hpp"
#include "multilinear.hpp"
#include "poisson_chaos/error.hpp"
#include "poisson_chaos/rng.hpp"

namespace poisson_chaos {

using detail::BlockTensor;

namespace {

// Largest singular value of the n1 x n2 flattening by power iteration on M^T M.
double flattening_power_iteration(const BlockTensor& bt, std::uint64_t seed) {
  const std::size_t n1 = bt.dims[0], n2 = bt.dims[1];
  Rng rng = make_rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<double> v(n2), u(n1), w(n2);
  for (double& x : v) x = gauss(rng);
  detail::normalize(v);
  double sigma = 0.0;
  for (int it = 0; it < 5000; ++it) {
    for (std::size_t i = 0; i < n1; ++i) {
      double s = 0.0;
      const double* row = bt.data.data() + i * n2;
      for (std::size_t j = 0; j < n2; ++j) s += row[j] * v[j];
      u[i] = s;
    }
    std::fill(w.begin(), w.end(), 0.0);
    for (std::size_t i = 0; i < n1; ++i) {
      const double* row = bt.data.data() + i * n2;
      for (std::size_t j = 0; j < n2; ++j) w[j] += row[j] * u[i];
    }
    const double nw = detail::norm2(w);
    if (nw == 0.0) return 0.0;
    const double next = std::sqrt(nw);  // ||M^T M v|| -> sigma^2
    for (std::size_t j = 0; j < n2; ++j) v[j] = w[j] / nw;
    if (std::abs(next - sigma) <= 1e-15 * next) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  // Rayleigh value ||M v|| is a certified lower bound of sigma_max.
  for (std::size_t i = 0; i < n1; ++i) {
    double s = 0.0;
    const double* row = bt.data.data() + i * n2;
    for (std::size_t j = 0; j < n2; ++j) s += row[j] * v[j];
    u[i] = s;
  }
  return detail::norm2(u);
}

NormResult alternating_maximization(const BlockTensor& bt, const NormOptions& opts) {
  NormResult res;
  const std::size_t m = bt.modes();
  const double scale = bt.frobenius();
  Rng rng = make_rng(opts.seed);
  std::normal_distribution<double> gauss;

  // Deterministic first start at the largest entry.
  std::size_t argmax = 0;
  for (std::size_t f = 1; f < bt.data.size(); ++f)
    if (std::abs(bt.data[f]) > std::abs(bt.data[argmax])) argmax = f;
  std::vector<std::size_t> amax(m);
  {
    std::size_t f = argmax;
    for (std::size_t c = m; c-- > 0;) {
      amax[c] = f % bt.dims[c];
      f /= bt.dims[c];
    }
  }

  std::vector<std::vector<double>> phi(m);
  std::vector<double> v;
  const int restarts = std::max(1, opts.restarts);
  for (int r = 0; r < restarts; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      phi[c].assign(bt.dims[c], 0.0);
      if (r == 0) {
        phi[c][amax[c]] = 1.0;
      } else {
        for (double& x : phi[c]) x = gauss(rng);
        detail::normalize(phi[c]);
      }
    }
    double obj = std::abs(bt.form(phi));
    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
      ++res.sweeps;
      const double before = obj;
      for (std::size_t b = 0; b < m; ++b) {
        bt.contract_except(b, phi, v);
        const double nv = detail::norm2(v);
        if (nv == 0.0) continue;  // factor already orthogonal to everything; keep it
        for (std::size_t j = 0; j < v.size(); ++j) phi[b][j] = v[j] / nv;
        res.max_decrease = std::max(res.max_decrease, obj - nv);
        obj = nv;
      }
      if (obj - before <= opts.tolerance * std::max(scale, 1e-300)) break;
    }
    res.value = std::max(res.value, obj);
  }
  return res;
}

NormResult norm_of_block_tensor(const BlockTensor& bt, const NormOptions& opts) {
  NormResult res;
  if (bt.is_zero()) return res;
  if (bt.modes() == 1) {
    res.value = bt.frobenius();
    return res;
  }
  res = alternating_maximization(bt, opts);
  if (bt.modes() == 2) {
    res.power_iteration = flattening_power_iteration(bt, opts.seed ^ 0x9E3779B97F4A7C15ULL);
    res.value = std::max(res.value, res.power_iteration);
  }
  return res;
}

Partition shifted(const Partition& J, int k, int new_d) {
  Partition out;
  out.d = new_d;
  for (const auto& b : J.blocks) {
    std::vector<int> nb;
    for (int e : b) nb.push_back(e - k);
    out.blocks.push_back(std::move(nb));
  }
  return out;
}

}  // namespace

NormResult partition_norm_detailed(const DiscreteKernel& g, const Partition& J, const NormOptions& opts) {
  g.validate();
  if (J.d != g.order()) throw InvalidArgument("partition order does not match kernel order");
  J.validate();
  if (static_cast<int>(J.support().size()) != g.order()) {
    throw InvalidArgument("partition must cover 1..d; use conditional_norm_sup for subsets");
  }
  return norm_of_block_tensor(detail::regroup(g.values, g.grid.weights, J), opts);
}

double partition_norm(const DiscreteKernel& g, const Partition& J, const NormOptions& opts) {
  return partition_norm_detailed(g, J, opts).value;
}

double conditional_norm_sup(const DiscreteKernel& g, int k, const Partition& J, const NormOptions& opts) {
  g.validate();
  const int d = g.order();
  if (k < 0 || k > d) throw InvalidArgument("conditional norm: k must lie in 0..d");
  if (J.d != d) throw InvalidArgument("partition order does not match kernel order");
  J.validate();
  if (J.support() != range_set(k + 1, d)) throw InvalidArgument("conditional norm: J must partition {k+1..d}");
  if (g.values.is_zero()) return 0.0;
  if (k == d) return g.values.max_abs();
  if (k == 0) return partition_norm(g, J, opts);

  const Partition inner = shifted(J, k, d - k);
  const std::size_t R = g.side();
  const std::size_t prefixes = checked_power(R, k, std::size_t{1} << 28);
  std::vector<std::size_t> prefix(static_cast<std::size_t>(k));
  const bool single_block = inner.size() == 1;
  double best = 0.0;
  for (std::size_t p = 0; p < prefixes; ++p) {
    std::size_t rem = p;
    for (int a = k - 1; a >= 0; --a) {
      prefix[static_cast<std::size_t>(a)] = rem % R;
      rem /= R;
    }
    DiscreteKernel slice{g.grid, g.values.slice(prefix)};
    if (slice.values.is_zero()) continue;
    best = std::max(best, single_block ? l2_norm(slice) : partition_norm(slice, inner, opts));
  }
  return best;
}

std::string norm_key(int k, const Partition& J) { return std::to_string(k) + "/" + J.to_string(); }

const NormEntry* NormTable::find(const std::string& key) const {
  for (const auto& e : entries)
    if (e.key == key) return &e;
  return nullptr;
}

std::string NormTable::to_json() const {
  nlohmann::json j;
  j["order"] = order;
  j["l2"] = l2;
  j["B"] = B;
  nlohmann::json entries_json = nlohmann::json::object();
  for (const auto& e : entries) {
    entries_json[e.key] = {{"k", e.k}, {"partition", e.partition.to_string()}, {"blocks", e.partition.size()},
                           {"multiplicity", e.multiplicity}, {"value", e.value}};
  }
  j["entries"] = std::move(entries_json);
  return j.dump(2);
}

NormTable build_norm_table(const DiscreteKernel& g, const NormOptions& opts) {
  g.validate();
  const int d = g.order();
  if (d > 4) throw SizeError("norm tables are limited to d <= 4");
  NormTable table;
  table.order = d;
  table.B.assign(static_cast<std::size_t>(d + 1), 0.0);
  for (int k = 0; k <= d; ++k) {
    for (const auto& cls : shape_classes(d, range_set(k + 1, d))) {
      NormEntry e;
      e.k = k;
      e.partition = cls.representative;
      e.multiplicity = cls.multiplicity;
      e.value = conditional_norm_sup(g, k, e.partition, opts);
      e.key = norm_key(k, e.partition);
      if (e.partition.size() <= 1) table.B[static_cast<std::size_t>(k)] = e.value;
      if (k == 0 && e.partition.size() == 1) table.l2 = e.value;
      table.entries.push_back(std::move(e));
    }
  }
  return table;
}

namespace {

// lambda(B(x, r) ∩ box) / density for a 1-D interval [0, s].
double interval_ball(double x, double r, double s) { return std::min(s, x + r) - std::max(0.0, x - r); }

}  // namespace

BallQuantities subgraph_bound_quantities(const SpaceConfig& space, double r, int kmax, std::size_t q) {
  if (!(r > 0.0)) throw InvalidArgument("ball quantities: r must be > 0");
  if (kmax < 0) throw InvalidArgument("ball quantities: kmax must be >= 0");
  space.validate();
  BallQuantities out;
  out.A.assign(static_cast<std::size_t>(kmax + 1), 0.0);
  const double mass = space.total_mass();
  if (space.kind == SpaceKind::torus) {
    if (r >= 0.5) throw DomainError("torus closed form needs r < 1/2");
    const double ball = space.density * unit_ball_volume(space.dimension) * std::pow(r, space.dimension);
    out.B = ball;
    for (int k = 0; k <= kmax; ++k) out.A[static_cast<std::size_t>(k)] = mass * std::pow(ball, k);
    return out;
  }
  if (space.kind != SpaceKind::box) throw InvalidArgument("ball quantities need a box or torus space");
  const int N = space.dimension;
  if (N > 2) throw SizeError("box ball quantities implemented for dimension <= 2");
  if (q == 0) throw InvalidArgument("quadrature cells must be >= 1");
  std::vector<double> hs;
  for (double s : space.sides) hs.push_back(s / static_cast<double>(q));
  // Outer midpoint rule; inner measure exact in 1-D, fine-grid counting in 2-D.
  const std::size_t inner_q = 4 * q;
  auto ball_measure = [&](const std::vector<double>& x) {
    if (N == 1) return space.density * interval_ball(x[0], r, space.sides[0]);
    double count = 0.0;
    const double h0 = space.sides[0] / static_cast<double>(inner_q), h1 = space.sides[1] / static_cast<double>(inner_q);
    for (std::size_t i = 0; i < inner_q; ++i) {
      const double y0 = (static_cast<double>(i) + 0.5) * h0 - x[0];
      if (std::abs(y0) > r) continue;
      const double half = std::sqrt(r * r - y0 * y0);
      count += interval_ball(x[1], half, space.sides[1]) / h1;
    }
    return space.density * count * h0 * h1;
  };
  std::vector<double> x(static_cast<std::size_t>(N));
  const std::size_t total = N == 1 ? q : q * q;
  double cell = space.density;
  for (double h : hs) cell *= h;
  for (std::size_t c = 0; c < total; ++c) {
    x[0] = (static_cast<double>(N == 1 ? c : c / q) + 0.5) * hs[0];
    if (N == 2) x[1] = (static_cast<double>(c % q) + 0.5) * hs[1];
    const double b = ball_measure(x);
    out.B = std::max(out.B, b);
    for (int k = 0; k <= kmax; ++k) out.A[static_cast<std::size_t>(k)] += cell * std::pow(b, k);
  }
  out.A[0] = mass;
  return out;
}

}  // namespace poisson_chaos
