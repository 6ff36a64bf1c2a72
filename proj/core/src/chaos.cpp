#include "poisson_chaos/chaos.hpp"

#include <cmath>
#include <ostream>

#include "poisson_chaos/error.hpp"
#include "poisson_chaos/io.hpp"

namespace poisson_chaos {

namespace {

constexpr int kMaxEnumerationOrder = 4;
constexpr double kMaxTupleWork = 2e8;

void check_order(int n) {
  if (n > kMaxEnumerationOrder) throw SizeError("factorial enumeration is limited to order <= 4");
}

double pow_int(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

CompensatedCounts compensated_counts(const Grid& grid, std::span<const std::int32_t> cells,
                                     std::span<const double> times, double t) {
  CompensatedCounts cc;
  cc.t = t;
  cc.counts = cell_counts(cells, times, t, grid.size());
  cc.compensated.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) cc.compensated[i] = cc.counts[i] - t * grid.weights[i];
  return cc;
}

CompensatedCounts compensated_counts(const Grid& grid, const SpatioTemporalSample& sample, double t) {
  if (!(t >= 0.0 && t <= sample.horizon)) throw RangeError("t must lie in [0, horizon]");
  const auto cells = resolve_cells(grid, sample);
  return compensated_counts(grid, cells, sample.times, t);
}

double wiener_ito_step(const StepKernel& h, const CompensatedCounts& cc) {
  if (cc.compensated.size() != h.side()) throw InvalidConfiguration("counts do not match kernel cells");
  Tensor t = h.coeffs;
  for (int j = h.order(); j > 0; --j) t = t.contract_last(cc.compensated);
  return t[0];
}

double wiener_ito_step(const StepKernel& h, const SpatioTemporalSample& sample, double t) {
  return wiener_ito_step(h, compensated_counts(h.grid, sample, t));
}

double factorial_integral(const Tensor& f, std::span<const double> counts) {
  const int k = f.order();
  check_order(k);
  if (k == 0) return f[0];
  if (counts.size() != f.side()) throw InvalidConfiguration("counts do not match tensor side");
  std::vector<std::size_t> occupied;
  for (std::size_t c = 0; c < counts.size(); ++c)
    if (counts[c] > 0.0) occupied.push_back(c);
  if (std::pow(static_cast<double>(occupied.size()), k) > kMaxTupleWork) {
    throw SizeError("factorial integral exceeds the enumeration budget");
  }
  std::vector<double> avail(counts.begin(), counts.end());
  const std::size_t side = f.side();
  double total = 0.0;
  // Depth-first over occupied cells; `avail` holds points still unused in each cell.
  auto rec = [&](auto&& self, int pos, std::size_t flat, double mult) -> void {
    if (pos == k) {
      total += f[flat] * mult;
      return;
    }
    for (std::size_t c : occupied) {
      const double a = avail[c];
      if (a <= 0.0) continue;
      avail[c] = a - 1.0;
      self(self, pos + 1, flat * side + c, mult * a);
      avail[c] = a;
    }
  };
  rec(rec, 0, 0, 1.0);
  return total;
}

double multiple_integral(const DiscreteKernel& f, const CompensatedCounts& cc) {
  const int n = f.order();
  check_order(n);
  if (cc.counts.size() != f.side()) throw InvalidConfiguration("counts do not match kernel cells");
  std::vector<double> tw(f.grid.weights);
  for (double& w : tw) w *= cc.t;
  // F_k: f with its trailing n - k arguments integrated against t * lambda.
  std::vector<Tensor> F(static_cast<std::size_t>(n + 1));
  F[static_cast<std::size_t>(n)] = f.values;
  for (int k = n - 1; k >= 0; --k) F[static_cast<std::size_t>(k)] = F[static_cast<std::size_t>(k + 1)].contract_last(tw);
  double total = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double sign = ((n - k) % 2 == 0) ? 1.0 : -1.0;
    total += sign * binomial(n, k) * factorial_integral(F[static_cast<std::size_t>(k)], cc.counts);
  }
  return total;
}

double ustat_from_counts(const DiscreteKernel& g, std::span<const double> counts) {
  return factorial_integral(g.values, counts);
}

namespace {

void check_direct_budget(std::size_t n, int d) {
  if (d < 1) throw InvalidArgument("U-statistic order must be >= 1");
  if (static_cast<double>(falling_factorial(n, d)) > kMaxTupleWork) {
    throw SizeError("direct U-statistic enumeration exceeds the tuple budget");
  }
}

}  // namespace

double ustat(const DiscreteKernel& g, const SpatioTemporalSample& sample, double t) {
  if (!(t >= 0.0 && t <= sample.horizon)) throw RangeError("t must lie in [0, horizon]");
  const auto cells = resolve_cells(g.grid, sample);
  const std::size_t n = count_until(sample, t);
  const int d = g.order();
  check_direct_budget(n, d);
  const std::size_t side = g.side();
  double total = 0.0;
  for_each_factorial_tuple(n, d, [&](std::span<const std::size_t> tuple) {
    std::size_t flat = 0;
    for (std::size_t i : tuple) flat = flat * side + static_cast<std::size_t>(cells[i]);
    total += g.values[flat];
  });
  return total;
}

namespace {

template <class PointAt>
double analytic_ustat(const AnalyticKernel& g, std::size_t n, PointAt&& point_at) {
  validate(g);
  const int d = kernel_order(g);
  check_direct_budget(n, d);
  const auto pd = static_cast<std::size_t>(point_dim(g));
  std::vector<double> pts(static_cast<std::size_t>(d) * pd);
  double total = 0.0;
  for_each_factorial_tuple(n, d, [&](std::span<const std::size_t> tuple) {
    for (std::size_t a = 0; a < tuple.size(); ++a) point_at(tuple[a], std::span<double>(pts).subspan(a * pd, pd));
    total += eval(g, pts);
  });
  return total;
}

}  // namespace

double ustat(const AnalyticKernel& g, const SpatioTemporalSample& sample, double t) {
  if (!(t >= 0.0 && t <= sample.horizon)) throw RangeError("t must lie in [0, horizon]");
  if (static_cast<std::size_t>(point_dim(g)) != sample.space.location_dimension()) {
    throw InvalidArgument("ustat: kernel point dimension does not match sample");
  }
  return analytic_ustat(g, count_until(sample, t), [&](std::size_t i, std::span<double> out) {
    auto x = sample.location(i);
    std::copy(x.begin(), x.end(), out.begin());
  });
}

double ustat(const AnalyticKernel& g, const MarkedSample& sample, double t) {
  const auto& base = sample.base;
  if (!(t >= 0.0 && t <= base.horizon)) throw RangeError("t must lie in [0, horizon]");
  const std::size_t loc = base.space.location_dimension();
  if (static_cast<std::size_t>(point_dim(g)) != loc + 1) {
    throw InvalidArgument("ustat: kernel point dimension does not match marked sample");
  }
  return analytic_ustat(g, count_until(base, t), [&](std::size_t i, std::span<double> out) {
    auto x = base.location(i);
    std::copy(x.begin(), x.end(), out.begin());
    out[loc] = sample.marks[i];
  });
}

double ustat_mean(const DiscreteKernel& g, double t) { return pow_int(t, g.order()) * integral(g); }

double ustat_variance(const DiscreteKernel& g, double t) {
  const int d = g.order();
  double v = 0.0;
  for (int n = 1; n <= d; ++n) {
    const double norm = l2_norm(project_kernel(g, n));
    const double c = binomial(d, n);
    v += factorial(n) * c * c * pow_int(t, 2 * d - n) * norm * norm;
  }
  return v;
}

ChaosDecomposition chaos_expand(const DiscreteKernel& g) {
  g.validate();
  ChaosDecomposition dec;
  dec.order = g.order();
  dec.kernels.resize(static_cast<std::size_t>(dec.order));
  dec.kernels.back() = g;
  for (int n = dec.order - 1; n >= 1; --n) {
    const auto& above = dec.kernels[static_cast<std::size_t>(n)];
    dec.kernels[static_cast<std::size_t>(n - 1)] = {g.grid, above.values.contract_last(g.grid.weights)};
  }
  dec.mean_coefficient = integral(g);
  for (int n = 1; n <= dec.order; ++n) dec.binomial_weights.push_back(binomial(dec.order, n));
  return dec;
}

ChaosDecomposition chaos_expand(const StepKernel& g) { return chaos_expand(g.as_discrete()); }

ChaosEvaluation evaluate_chaos(const StepKernel& g, const ChaosDecomposition& dec, const SpatioTemporalSample& sample,
                               double t) {
  const auto cc = compensated_counts(g.grid, sample, t);
  ChaosEvaluation ev;
  ev.t = t;
  ev.ustat = ustat(g.as_discrete(), sample, t);
  ev.mean = pow_int(t, dec.order) * dec.mean_coefficient;
  double rhs = 0.0;
  for (int n = 1; n <= dec.order; ++n) {
    const double I = multiple_integral(dec.g(n), cc);
    ev.integrals.push_back(I);
    rhs += dec.binomial_weights[static_cast<std::size_t>(n - 1)] * pow_int(t, dec.order - n) * I;
  }
  ev.residual = ev.ustat - ev.mean - rhs;
  return ev;
}

double chaos_identity_residual(const StepKernel& g, const SpatioTemporalSample& sample, double t) {
  return evaluate_chaos(g, chaos_expand(g), sample, t).residual;
}

void require_chaos_identity(const ChaosEvaluation& ev, double tol) {
  if (!(std::abs(ev.residual) <= tol * (1.0 + std::abs(ev.ustat)))) {
    throw IdentityViolation("chaos expansion residual " + format_double(ev.residual) + " at t=" + format_double(ev.t));
  }
}

void write_chaos_trace_csv(std::ostream& os, const std::vector<ChaosEvaluation>& rows) {
  const std::size_t d = rows.empty() ? 0 : rows.front().integrals.size();
  std::vector<std::string> header{"t", "U_t", "E_U_t"};
  for (std::size_t n = 1; n <= d; ++n) header.push_back("I" + std::to_string(n));
  header.push_back("residual");
  write_csv_row(os, header);
  for (const auto& r : rows) {
    std::vector<std::string> cells{format_double(r.t), format_double(r.ustat), format_double(r.mean)};
    for (double I : r.integrals) cells.push_back(format_double(I));
    cells.push_back(format_double(r.residual));
    write_csv_row(os, cells);
  }
}

}  // namespace poisson_chaos
