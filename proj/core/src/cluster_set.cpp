#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "poisson_chaos/bounds.hpp"
#include "poisson_chaos/chaos.hpp"
#include "poisson_chaos/error.hpp"
#include "poisson_chaos/rng.hpp"

namespace poisson_chaos {

SymmetricEigen jacobi_eigen(std::vector<double> a, std::size_t n) {
  if (a.size() != n * n) throw InvalidArgument("jacobi_eigen: matrix must be n x n");
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  auto A = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  double frob = 0.0;
  for (double x : a) frob += x * x;
  const double eps = 1e-30 * std::max(frob, 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += A(i, j) * A(i, j);
    if (off <= eps) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (apq == 0.0) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return A(x, x) < A(y, y); });
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = A(order[c], order[c]);
    for (std::size_t r = 0; r < n; ++r) out.vectors[r * n + c] = v[r * n + order[c]];
  }
  return out;
}

int degeneracy_order(const DiscreteKernel& g, double relative_threshold) {
  const double base = l2_norm(g);
  if (base == 0.0) return 0;
  const auto dec = chaos_expand(g);
  for (int n = 1; n <= dec.order; ++n) {
    if (l2_norm(dec.g(n)) > relative_threshold * base) return n;
  }
  return dec.order;
}

namespace {

// phi in weighted coordinates from an unweighted unit vector psi.
std::vector<double> to_weighted(const std::vector<double>& psi, const std::vector<double>& w) {
  std::vector<double> phi(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) phi[i] = psi[i] / std::sqrt(w[i]);
  return phi;
}

}  // namespace

ClusterSet lil_cluster_set(const DiscreteKernel& g, int restarts, std::uint64_t seed) {
  g.validate();
  const int d = g.order();
  if (d > 3) throw SizeError("cluster set: d <= 3");
  const std::size_t R = g.side();
  const auto& w = g.grid.weights;
  ClusterSet cs;
  cs.order = d;
  cs.degeneracy_order = degeneracy_order(g);
  if (g.values.is_zero()) {
    cs.direction.assign(R, 0.0);
    return cs;
  }

  if (d == 1) {
    const double n = l2_norm(g);
    cs.upper = n;
    cs.lower = -n;
    cs.direction.resize(R);
    for (std::size_t i = 0; i < R; ++i) cs.direction[i] = g.values[i] / n;
    return cs;
  }

  if (d == 2) {
    std::vector<double> K(R * R);
    for (std::size_t i = 0; i < R; ++i)
      for (std::size_t j = 0; j < R; ++j) K[i * R + j] = std::sqrt(w[i]) * g.values[i * R + j] * std::sqrt(w[j]);
    const auto eig = jacobi_eigen(std::move(K), R);
    cs.upper = std::max(eig.values.back(), 0.0);
    cs.lower = std::min(eig.values.front(), 0.0);
    std::vector<double> psi(R);
    for (std::size_t i = 0; i < R; ++i) psi[i] = eig.vectors[i * R + (R - 1)];
    cs.direction = to_weighted(psi, w);
    return cs;
  }

  // d = 3: shifted symmetric higher-order power method on G~ = g * prod sqrt(w).
  std::vector<double> G(g.values.size());
  std::vector<std::size_t> idx(3);
  double frob = 0.0;
  for (std::size_t f = 0; f < G.size(); ++f) {
    g.values.unflatten(f, idx);
    G[f] = g.values[f] * std::sqrt(w[idx[0]] * w[idx[1]] * w[idx[2]]);
    frob += G[f] * G[f];
  }
  frob = std::sqrt(frob);
  const double shift = 2.0 * frob;
  auto form = [&](const std::vector<double>& x, std::vector<double>* grad) {
    std::vector<double> gx(R, 0.0);
    for (std::size_t i = 0; i < R; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < R; ++j) {
        const double* row = G.data() + (i * R + j) * R;
        double inner = 0.0;
        for (std::size_t k = 0; k < R; ++k) inner += row[k] * x[k];
        s += inner * x[j];
      }
      gx[i] = s;
    }
    double val = 0.0;
    for (std::size_t i = 0; i < R; ++i) val += gx[i] * x[i];
    if (grad) *grad = std::move(gx);
    return val;
  };
  Rng rng = make_rng(seed);
  std::normal_distribution<double> gauss;
  double best = -1.0;
  std::vector<double> best_x;
  std::vector<double> x(R), grad;
  for (int r = 0; r < std::max(restarts, 1); ++r) {
    for (double& v : x) v = gauss(rng);
    double nx = 0.0;
    for (double v : x) nx += v * v;
    for (double& v : x) v /= std::sqrt(nx);
    double val = form(x, nullptr);
    for (int it = 0; it < 2000; ++it) {
      form(x, &grad);
      double nn = 0.0;
      for (std::size_t i = 0; i < R; ++i) {
        grad[i] += shift * x[i];
        nn += grad[i] * grad[i];
      }
      nn = std::sqrt(nn);
      for (std::size_t i = 0; i < R; ++i) x[i] = grad[i] / nn;
      const double next = form(x, nullptr);
      if (std::abs(next - val) <= 1e-15 * frob) {
        val = next;
        break;
      }
      val = next;
    }
    // Odd order: -x attains -val, so only |val| matters.
    if (std::abs(val) > best) {
      best = std::abs(val);
      best_x = x;
      if (val < 0)
        for (double& v : best_x) v = -v;
    }
  }
  cs.upper = best;
  cs.lower = -best;
  cs.direction = to_weighted(best_x, w);
  return cs;
}

}  // namespace poisson_chaos
