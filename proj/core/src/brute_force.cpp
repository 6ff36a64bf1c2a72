#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "multilinear.hpp"
#include "poisson_chaos/error.hpp"
#include "poisson_chaos/norms.hpp"
#include "poisson_chaos/rng.hpp"

namespace poisson_chaos {

using detail::BlockTensor;

namespace {

using Factors = std::vector<std::vector<double>>;

// Simultaneous Riemannian gradient ascent on the product of spheres with
// backtracking; deliberately unlike the block-coordinate solver.
double gradient_ascent(const BlockTensor& bt, Factors phi, int max_iter) {
  const std::size_t m = bt.modes();
  const double scale = std::max(bt.frobenius(), 1e-300);
  double step = 0.5 / scale;
  std::vector<std::vector<double>> grad(m);
  double f = bt.form(phi);
  if (f < 0.0) {
    for (double& x : phi[0]) x = -x;
    f = -f;
  }
  for (int it = 0; it < max_iter; ++it) {
    double gnorm = 0.0;
    for (std::size_t b = 0; b < m; ++b) {
      bt.contract_except(b, phi, grad[b]);
      for (std::size_t j = 0; j < grad[b].size(); ++j) {
        grad[b][j] -= f * phi[b][j];
        gnorm += grad[b][j] * grad[b][j];
      }
    }
    if (std::sqrt(gnorm) <= 1e-13 * scale) break;
    bool improved = false;
    for (int tries = 0; tries < 40; ++tries) {
      Factors trial = phi;
      for (std::size_t b = 0; b < m; ++b) {
        for (std::size_t j = 0; j < trial[b].size(); ++j) trial[b][j] += step * grad[b][j];
        detail::normalize(trial[b]);
      }
      const double ft = bt.form(trial);
      if (ft >= f) {
        phi = std::move(trial);
        f = ft;
        step *= 1.5;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  return f;
}

// Exact maximum over the remaining factors after fixing the first one.
// Returns -1 when more than two modes remain.
double inner_exact(const BlockTensor& bt, const std::vector<double>& phi0, Factors* argmax) {
  const std::size_t m = bt.modes();
  const std::size_t rest = bt.data.size() / bt.dims[0];
  std::vector<double> c(rest, 0.0);
  for (std::size_t i = 0; i < bt.dims[0]; ++i)
    for (std::size_t j = 0; j < rest; ++j) c[j] += phi0[i] * bt.data[i * rest + j];
  if (m == 1) return std::abs(c[0]);
  if (m == 2) {
    if (argmax) (*argmax)[1] = c;
    return detail::norm2(c);
  }
  if (m == 3) {
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> M(
        c.data(), static_cast<Eigen::Index>(bt.dims[1]), static_cast<Eigen::Index>(bt.dims[2]));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (argmax) {
      const Eigen::VectorXd u = svd.matrixU().col(0), v = svd.matrixV().col(0);
      (*argmax)[1].assign(u.data(), u.data() + u.size());
      (*argmax)[2].assign(v.data(), v.data() + v.size());
    }
    return svd.singularValues()(0);
  }
  return -1.0;
}

// Unit vectors of R^n (n <= 3) on an angular grid.
std::vector<std::vector<double>> sphere_grid(std::size_t n, double degrees) {
  std::vector<std::vector<double>> out;
  const double h = degrees * std::numbers::pi / 180.0;
  if (n == 1) {
    out.push_back({1.0});
  } else if (n == 2) {
    for (double a = 0.0; a < std::numbers::pi; a += h) out.push_back({std::cos(a), std::sin(a)});
  } else if (n == 3) {
    // Hemisphere suffices: the form is odd in each factor.
    for (double th = 0.0; th <= std::numbers::pi / 2 + 1e-12; th += h) {
      const double ring = std::sin(th);
      const double dphi = ring > 1e-12 ? h : 2.0 * std::numbers::pi;
      for (double ph = 0.0; ph < 2.0 * std::numbers::pi - 1e-12; ph += dphi) {
        out.push_back({ring * std::cos(ph), ring * std::sin(ph), std::cos(th)});
      }
    }
  }
  return out;
}

}  // namespace

double brute_force_norm(const DiscreteKernel& g, const Partition& J, const BruteForceOptions& opts) {
  g.validate();
  if (g.values.size() > 256) throw SizeError("brute_force_norm: tensor size must be <= 256");
  if (J.d != g.order()) throw InvalidArgument("partition order does not match kernel order");
  const BlockTensor bt = detail::regroup(g.values, g.grid.weights, J);
  if (bt.is_zero()) return 0.0;
  if (bt.modes() == 1) return bt.frobenius();

  const std::size_t m = bt.modes();
  Rng rng = make_rng(opts.seed);
  std::normal_distribution<double> gauss;
  double best = 0.0;
  Factors phi(m);
  for (int s = 0; s < std::max(opts.starts, 200); ++s) {
    for (std::size_t b = 0; b < m; ++b) {
      phi[b].resize(bt.dims[b]);
      for (double& x : phi[b]) x = gauss(rng);
      detail::normalize(phi[b]);
    }
    best = std::max(best, gradient_ascent(bt, phi, opts.max_iterations));
  }

  if (bt.dims[0] <= 3 && m <= 3) {
    double grid_best = -1.0;
    Factors grid_arg(m);
    for (const auto& v : sphere_grid(bt.dims[0], opts.grid_degrees)) {
      Factors arg(m);
      const double val = inner_exact(bt, v, &arg);
      if (val > grid_best) {
        grid_best = val;
        arg[0] = v;
        grid_arg = std::move(arg);
      }
    }
    best = std::max(best, grid_best);
    // Polish the best grid point.
    for (std::size_t b = 1; b < m; ++b) {
      if (grid_arg[b].size() != bt.dims[b]) grid_arg[b].assign(bt.dims[b], 1.0);
      detail::normalize(grid_arg[b]);
    }
    best = std::max(best, gradient_ascent(bt, grid_arg, opts.max_iterations));
  }
  return best;
}

}  // namespace poisson_chaos
