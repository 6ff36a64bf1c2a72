#include "poisson_chaos/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "poisson_chaos/error.hpp"
#include "poisson_chaos/io.hpp"

namespace poisson_chaos {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be finite and > 0");
}

void require_p(double p) {
  if (!(p >= 2.0) || !std::isfinite(p)) throw DomainError("moment order p must be >= 2");
}

// Running minimum of the exponent terms; zero-norm terms never win.
struct MinTracker {
  double best = kInf;
  std::string regime;
  void offer(double term, const std::string& tag) {
    if (term < best) {
      best = term;
      regime = tag;
    }
  }
  TailBound finish(double c) const {
    TailBound b;
    if (best == kInf) {
      b.value = 0.0;
      b.exponent = kInf;
      b.zero_kernel = true;
      b.regime = "zero_kernel";
      return b;
    }
    b.exponent = best;
    b.value = 2.0 * std::exp(-c * best);
    b.regime = regime;
    return b;
  }
};

std::string entry_tag(const NormEntry& e) { return "k=" + std::to_string(e.k) + ",J=" + e.partition.to_string(); }

}  // namespace

TailBound integral_tail_bound(const NormTable& table, double T, double u, double c) {
  require_positive(T, "T");
  require_positive(u, "u");
  require_positive(c, "c");
  const int d = table.order;
  MinTracker m;
  for (const auto& e : table.entries) {
    if (e.value <= 0.0) continue;
    const double scale = std::pow(T, (d - e.k) / 2.0) * e.value;
    const double q = 2.0 / (2.0 * e.k + static_cast<double>(e.partition.size()));
    m.offer(std::pow(u / scale, q), entry_tag(e));
  }
  return m.finish(c);
}

double integral_moment_bound(const NormTable& table, double T, double p, double C) {
  require_positive(T, "T");
  require_p(p);
  require_positive(C, "C");
  const int d = table.order;
  double s = 0.0;
  for (const auto& e : table.entries) {
    s += static_cast<double>(e.multiplicity) * std::pow(p, e.k + e.partition.size() / 2.0) *
         std::pow(T, (d - e.k) / 2.0) * e.value;
  }
  return C * s;
}

TailBound simplified_tail_bound(std::span<const double> B, double T, double u, double c) {
  require_positive(T, "T");
  require_positive(u, "u");
  require_positive(c, "c");
  if (B.empty()) throw InvalidArgument("simplified bound needs B_0..B_d");
  const int d = static_cast<int>(B.size()) - 1;
  MinTracker m;
  for (int k = 0; k <= d; ++k) {
    const double b = B[static_cast<std::size_t>(k)];
    if (b <= 0.0) continue;
    if (d + k == 0) continue;
    m.offer(std::pow(u / (std::pow(T, (d - k) / 2.0) * b), 2.0 / (d + k)), "k=" + std::to_string(k));
  }
  return m.finish(c);
}

double simplified_moment_bound(std::span<const double> B, double T, double p, double C) {
  require_positive(T, "T");
  require_p(p);
  require_positive(C, "C");
  const int d = static_cast<int>(B.size()) - 1;
  double s = 0.0;
  for (int k = 0; k <= d; ++k) s += std::pow(p, (d + k) / 2.0) * std::pow(T, (d - k) / 2.0) * B[static_cast<std::size_t>(k)];
  return C * s;
}

namespace {

void check_projected_tables(const std::vector<NormTable>& tables) {
  if (tables.empty()) throw InvalidArgument("U-statistic bound needs the tables of g_1..g_d");
  for (std::size_t n = 0; n < tables.size(); ++n) {
    if (tables[n].order != static_cast<int>(n + 1)) throw InvalidArgument("tables[n-1] must have order n");
  }
}

}  // namespace

TailBound ustat_tail_bound(const std::vector<NormTable>& tables, double T, double u, double c) {
  require_positive(T, "T");
  require_positive(u, "u");
  require_positive(c, "c");
  check_projected_tables(tables);
  const int d = static_cast<int>(tables.size());
  MinTracker m;
  for (int n = 1; n <= d; ++n) {
    for (const auto& e : tables[static_cast<std::size_t>(n - 1)].entries) {
      if (e.value <= 0.0) continue;
      const double scale = std::pow(T, d - (n + e.k) / 2.0) * e.value;
      const double q = 2.0 / (2.0 * e.k + static_cast<double>(e.partition.size()));
      m.offer(std::pow(u / scale, q), "n=" + std::to_string(n) + "," + entry_tag(e));
    }
  }
  return m.finish(c);
}

double ustat_moment_bound(const std::vector<NormTable>& tables, double T, double p, double C) {
  require_positive(T, "T");
  require_p(p);
  require_positive(C, "C");
  check_projected_tables(tables);
  const int d = static_cast<int>(tables.size());
  double s = 0.0;
  for (int n = 1; n <= d; ++n) {
    for (const auto& e : tables[static_cast<std::size_t>(n - 1)].entries) {
      s += static_cast<double>(e.multiplicity) * std::pow(T, d - (n + e.k) / 2.0) *
           std::pow(p, e.k + e.partition.size() / 2.0) * e.value;
    }
  }
  return C * s;
}

double ustat_gaussian_scale(const std::vector<NormTable>& tables, double T) {
  check_projected_tables(tables);
  const int d = static_cast<int>(tables.size());
  double s = 0.0;
  for (int n = 1; n <= d; ++n) {
    const double l2 = tables[static_cast<std::size_t>(n - 1)].l2;
    s += std::pow(T, 2 * d - n) * l2 * l2;
  }
  return s;
}

TailBound subgraph_tail_bound(double variance, double t, double B_dr, int d, double u, double c) {
  require_positive(t, "t");
  require_positive(u, "u");
  require_positive(c, "c");
  if (d < 1) throw InvalidArgument("subgraph bound: d must be >= 1");
  if (variance < 0.0 || B_dr < 0.0) throw DomainError("subgraph bound: variance and B must be >= 0");
  MinTracker m;
  if (variance > 0.0) m.offer(u * u / variance, "gaussian");
  if (B_dr > 0.0) m.offer(u / std::pow(t * B_dr, d - 1), "linear");
  m.offer(std::pow(u, 1.0 / d), "root");
  return m.finish(c);
}

namespace {

double ball_measure(const PowerLengthKernel& k, const Grid& grid, std::size_t i, double radius) {
  double s = 0.0;
  const auto x = grid.midpoint(i);
  for (std::size_t j = 0; j < grid.size(); ++j)
    if (distance(k.metric, x, grid.midpoint(j)) <= radius) s += grid.weights[j];
  return s;
}

template <class F>
void for_each_integrand(const PowerLengthKernel& k, const Grid& grid, double gamma, double p, F&& f) {
  if (grid.dim != k.dim) throw InvalidArgument("power-length quantities: grid dimension mismatch");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = k.radius(grid.midpoint(i));
    const double lam = ball_measure(k, grid, i, k.beta * r);
    const double val = (gamma == 0.0 ? 1.0 : std::pow(r, gamma)) * (p == 0.0 ? 1.0 : std::pow(lam, p));
    f(i, val);
  }
}

}  // namespace

double power_length_A(const PowerLengthKernel& k, const Grid& grid, double gamma, double p) {
  double s = 0.0;
  for_each_integrand(k, grid, gamma, p, [&](std::size_t i, double v) { s += grid.weights[i] * v; });
  return s;
}

double power_length_B(const PowerLengthKernel& k, const Grid& grid, double gamma, double p) {
  double s = 0.0;
  for_each_integrand(k, grid, gamma, p, [&](std::size_t, double v) { s = std::max(s, v); });
  return s;
}

PowerLengthQuantities power_length_quantities(const PowerLengthKernel& k, const Grid& grid) {
  const double a = k.alpha;
  return {power_length_A(k, grid, 2 * a, 2), power_length_A(k, grid, 2 * a, 1), power_length_B(k, grid, a, 1),
          power_length_B(k, grid, 2 * a / 3, 1.0 / 3), power_length_B(k, grid, a / 2, 0)};
}

double power_length_variance_bound(const PowerLengthQuantities& q, double t, double beta, double alpha, double C) {
  require_positive(t, "t");
  return C * std::pow(beta, 2 * alpha) * (t * t * t * q.A_2a_2 + t * t * q.A_2a_1);
}

TailBound power_length_bound(const PowerLengthQuantities& q, double t, double u, double beta, double alpha, double c,
                             double C) {
  require_positive(t, "t");
  require_positive(u, "u");
  require_positive(c, "c");
  if (!(beta >= 2.0)) throw DomainError("power-length bound: beta must be >= 2");
  const double var = power_length_variance_bound(q, t, beta, alpha, C);
  MinTracker m;
  if (var > 0.0) m.offer(u * u / var, "gaussian");
  if (q.B_a_1 > 0.0) m.offer(u / (t * std::pow(beta, alpha) * q.B_a_1), "linear");
  if (q.B_2a3_13 > 0.0) {
    m.offer(std::pow(u, 2.0 / 3) / (std::cbrt(t) * std::pow(beta, 2 * alpha / 3) * q.B_2a3_13), "two_thirds");
  }
  if (q.B_a2_0 > 0.0) m.offer(std::sqrt(u) / (std::pow(beta, alpha / 2) * q.B_a2_0), "half");
  return m.finish(c);
}

double ou_g1_norm_sq(double c_nu_sq, double rho, double T) {
  require_positive(rho, "rho");
  require_positive(T, "T");
  return c_nu_sq * (T + std::expm1(-2 * rho * T) / (2 * rho));
}

double ou_g2_norm_sq(double rho, double T) {
  require_positive(rho, "rho");
  require_positive(T, "T");
  return T / rho + std::expm1(-2 * rho * T) / (2 * rho * rho);
}

double ou_variance_bound(double c_nu_sq, double rho, double T) {
  require_positive(rho, "rho");
  if (!(T >= 0.0)) throw DomainError("T must be >= 0");
  return (c_nu_sq + 2.0 / rho) * T;
}

TailBound ou_bound(double rho, double A, double c_nu_sq, double T, double u, double c) {
  require_positive(rho, "rho");
  require_positive(A, "A");
  require_positive(T, "T");
  require_positive(u, "u");
  require_positive(c, "c");
  MinTracker m;
  const double var = ou_variance_bound(c_nu_sq, rho, T);
  if (var > 0.0) m.offer(u * u / var, "gaussian");
  m.offer(std::pow(u, 2.0 / 3) / (std::pow(A, 2.0 / 3) * std::pow(rho, -1.0 / 3)), "two_thirds");
  m.offer(std::sqrt(u) / A, "half");
  return m.finish(c);
}

double mixed_l1_l2_norm(const DiscreteKernel& g, const std::vector<int>& I) {
  g.validate();
  const int d = g.order();
  std::vector<char> inner(static_cast<std::size_t>(d), 0);
  for (int e : I) {
    if (e < 1 || e > d) throw InvalidArgument("subset I must lie in 1..d");
    if (inner[static_cast<std::size_t>(e - 1)]) throw InvalidArgument("subset I has repeated elements");
    inner[static_cast<std::size_t>(e - 1)] = 1;
  }
  const std::size_t R = g.side();
  const int outer_order = d - static_cast<int>(I.size());
  std::vector<double> sq(checked_power(R, outer_order, std::size_t{1} << 28), 0.0);
  std::vector<double> outer_w(sq.size(), 1.0);
  std::vector<std::size_t> idx(static_cast<std::size_t>(d));
  for (std::size_t f = 0; f < g.values.size(); ++f) {
    g.values.unflatten(f, idx);
    std::size_t key = 0;
    double wi = 1.0, wo = 1.0;
    for (int a = 0; a < d; ++a) {
      const std::size_t i = idx[static_cast<std::size_t>(a)];
      if (inner[static_cast<std::size_t>(a)]) {
        wi *= g.grid.weights[i];
      } else {
        key = key * R + i;
        wo *= g.grid.weights[i];
      }
    }
    sq[key] += wi * g.values[f] * g.values[f];
    outer_w[key] = wo;
  }
  double s = 0.0;
  for (std::size_t k = 0; k < sq.size(); ++k) s += outer_w[k] * std::sqrt(sq[k]);
  return s;
}

double polynomial_tail_bound(const DiscreteKernel& g, const std::vector<int>& I, double T, double u, double C) {
  require_positive(T, "T");
  require_positive(u, "u");
  require_positive(C, "C");
  const int d = g.order();
  return C / u * std::pow(T, d - static_cast<double>(I.size()) / 2.0) * mixed_l1_l2_norm(g, I);
}

void write_bound_curve_csv(std::ostream& os, const std::vector<BoundCurvePoint>& curve) {
  write_csv_row(os, {"u", "bound", "regime"});
  for (const auto& p : curve) write_csv_row(os, {format_double(p.u), format_double(p.bound), p.regime});
}

}  // namespace poisson_chaos
