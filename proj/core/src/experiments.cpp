#include "poisson_chaos/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

#include "poisson_chaos/error.hpp"
#include "poisson_chaos/io.hpp"

namespace poisson_chaos {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void validate_u_grid(const std::vector<double>& u) {
  if (u.empty()) throw InvalidConfiguration("u-grid must be nonempty");
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(u[i] > 0.0) || !std::isfinite(u[i])) throw InvalidConfiguration("u-grid values must be finite and > 0");
    if (i && !(u[i] > u[i - 1])) throw InvalidConfiguration("u-grid must be strictly increasing");
  }
}

void validate_replications(std::size_t M, std::size_t min = 1) {
  if (M < min) throw InvalidConfiguration("replication count M must be >= " + std::to_string(min));
}

// Counts per grid cell at time T of an independent semi-discrete sample.
std::vector<double> semi_discrete_counts(const Grid& grid, double T, std::uint64_t seed) {
  const auto sample = sample_process(finite_space(grid), T, seed);
  return cell_counts(sample.cells, sample.times, T, grid.size());
}

CompensatedCounts compensate(const Grid& grid, std::vector<double> counts, double t) {
  CompensatedCounts cc;
  cc.t = t;
  cc.counts = std::move(counts);
  cc.compensated.resize(cc.counts.size());
  for (std::size_t i = 0; i < cc.counts.size(); ++i) cc.compensated[i] = cc.counts[i] - t * grid.weights[i];
  return cc;
}

double pow_int(double b, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// U - EU - sum_n C(d,n) t^{d-n} I(g_n), all from one set of counts.
double count_based_residual(const ChaosDecomposition& dec, const CompensatedCounts& cc, double* ustat_out) {
  const double U = factorial_integral(dec.g(dec.order).values, cc.counts);
  double rhs = pow_int(cc.t, dec.order) * dec.mean_coefficient;
  for (int n = 1; n <= dec.order; ++n) {
    rhs += dec.binomial_weights[static_cast<std::size_t>(n - 1)] * pow_int(cc.t, dec.order - n) *
           multiple_integral(dec.g(n), cc);
  }
  if (ustat_out) *ustat_out = U;
  return U - rhs;
}

void require_identity(const ChaosDecomposition& dec, const CompensatedCounts& cc) {
  double U = 0.0;
  ChaosEvaluation ev;
  ev.t = cc.t;
  ev.residual = count_based_residual(dec, cc, &U);
  ev.ustat = U;
  require_chaos_identity(ev);
}

std::vector<TailCurvePoint> tail_curve(const std::vector<double>& values, const std::vector<double>& u_grid) {
  std::vector<TailCurvePoint> curve;
  for (double u : u_grid) {
    TailCurvePoint p;
    p.u = u;
    for (double v : values)
      if (std::abs(v) >= u) ++p.hits;
    p.frequency = static_cast<double>(p.hits) / static_cast<double>(values.size());
    p.wilson = wilson_interval(p.hits, values.size());
    curve.push_back(p);
  }
  return curve;
}

double tail_frequency(const std::vector<double>& values, double u) {
  std::size_t hits = 0;
  for (double v : values)
    if (std::abs(v) >= u) ++hits;
  return static_cast<double>(hits) / static_cast<double>(values.size());
}

}  // namespace

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("POISSON_CHAOS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 1024) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  const int workers = std::max(1, std::min<int>(resolve_thread_count(threads), static_cast<int>(std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

// ---- empirical tail ---------------------------------------------------------

ExperimentResult empirical_tail(const TailPlan& plan) {
  const auto start = Clock::now();
  validate_replications(plan.M);
  validate_u_grid(plan.u_grid);
  if (!(plan.T > 0.0) || !std::isfinite(plan.T)) throw InvalidConfiguration("T must be finite and > 0");
  if (!(plan.c > 0.0)) throw InvalidConfiguration("c must be > 0");
  const auto& kernel = plan.kernel;
  const int d = kernel.order();
  if (d > 4) throw SizeError("empirical_tail: d <= 4");

  const auto dec = chaos_expand(kernel);
  const DiscreteKernel g = kernel.as_discrete();
  const double mean = ustat_mean(g, plan.T);

  ExperimentResult res;
  res.name = "empirical_tail";
  res.seed = plan.seed;
  res.replications = plan.M;
  res.values.assign(plan.M, 0.0);
  parallel_for(plan.M, plan.threads, [&](std::size_t i) {
    const auto cc = compensate(kernel.grid, semi_discrete_counts(kernel.grid, plan.T, derive_seed(plan.seed, i)), plan.T);
    require_identity(dec, cc);
    if (plan.statistic == TailStatistic::integral) {
      res.values[i] = wiener_ito_step(kernel, cc);
    } else {
      res.values[i] = ustat_from_counts(g, cc.counts) - mean;
    }
  });

  // Bound curve.
  std::function<TailBound(double)> bound;
  NormTable table;
  std::vector<NormTable> projected;
  if (plan.family == BoundFamily::ustat_tail) {
    for (int n = 1; n <= d; ++n) projected.push_back(build_norm_table(dec.g(n), plan.norm_options));
    bound = [&](double u) { return ustat_tail_bound(projected, plan.T, u, 1.0); };
  } else {
    table = build_norm_table(g, plan.norm_options);
    if (plan.family == BoundFamily::simplified) {
      bound = [&](double u) { return simplified_tail_bound(table.B, plan.T, u, 1.0); };
    } else {
      bound = [&](double u) { return integral_tail_bound(table, plan.T, u, 1.0); };
    }
  }

  res.curve = tail_curve(res.values, plan.u_grid);
  double calibrated = std::numeric_limits<double>::infinity();
  for (auto& p : res.curve) {
    const TailBound b = bound(p.u);
    p.bound = b.zero_kernel ? 0.0 : 2.0 * std::exp(-plan.c * b.exponent);
    p.regime = b.regime;
    if (!b.zero_kernel && b.exponent > 0.0 && std::isfinite(b.exponent)) {
      calibrated = std::min(calibrated, std::log(2.0 / p.wilson.hi) / b.exponent);
    }
  }
  res.calibrated_c = std::isfinite(calibrated) ? calibrated : kNaN;
  const auto m = sample_moments(res.values);
  res.scalars["mean"] = m.mean;
  res.scalars["variance"] = m.variance;
  res.runtime_seconds = seconds_since(start);
  return res;
}

// ---- maximal inequality -----------------------------------------------------

ExperimentResult maximal_inequality_check(const MaximalPlan& plan) {
  const auto start = Clock::now();
  validate_replications(plan.M);
  validate_u_grid(plan.u_grid);
  if (!(plan.T > 0.0)) throw InvalidConfiguration("T must be > 0");
  if (plan.grid_points < 2) throw InvalidConfiguration("grid_points must be >= 2");
  const auto& kernel = plan.kernel;
  const Grid& grid = kernel.grid;
  const auto space = finite_space(grid);

  std::vector<double> sups(plan.M), ends(plan.M);
  parallel_for(plan.M, plan.threads, [&](std::size_t r) {
    const auto sample = sample_process(space, plan.T, derive_seed(plan.seed, r));
    std::vector<double> counts(grid.size(), 0.0);
    CompensatedCounts cc;
    auto value_at = [&](double t) {
      cc = compensate(grid, counts, t);
      return wiener_ito_step(kernel, cc);
    };
    double sup = 0.0;
    std::size_t next_event = 0;
    const std::size_t n = sample.size();
    for (std::size_t gp = 0; gp < plan.grid_points; ++gp) {
      const double tg = plan.T * static_cast<double>(gp) / static_cast<double>(plan.grid_points - 1);
      while (next_event < n && sample.times[next_event] <= tg) {
        const double te = sample.times[next_event];
        sup = std::max(sup, std::abs(value_at(te)));  // left limit
        counts[static_cast<std::size_t>(sample.cells[next_event])] += 1.0;
        sup = std::max(sup, std::abs(value_at(te)));  // after the jump
        ++next_event;
      }
      sup = std::max(sup, std::abs(value_at(tg)));
    }
    sups[r] = sup;
    ends[r] = std::abs(value_at(plan.T));
  });

  ExperimentResult res;
  res.name = "maximal_inequality";
  res.seed = plan.seed;
  res.replications = plan.M;
  res.values = sups;
  res.curve = tail_curve(sups, plan.u_grid);
  res.secondary_curve = tail_curve(ends, plan.u_grid);
  double smallest = 0.0;
  for (double C : {1.0, 2.0, 4.0, 8.0}) {
    bool ok = true;
    for (double u : plan.u_grid) {
      if (tail_frequency(sups, u) > C * tail_frequency(ends, u / C)) ok = false;
    }
    res.scalars["dominates_C" + std::to_string(static_cast<int>(C))] = ok ? 1.0 : 0.0;
    if (ok && smallest == 0.0) smallest = C;
  }
  bool sup_ge_end = true;
  for (std::size_t r = 0; r < plan.M; ++r) sup_ge_end = sup_ge_end && sups[r] >= ends[r];
  res.scalars["smallest_C"] = smallest;
  res.scalars["sup_dominates_endpoint"] = sup_ge_end ? 1.0 : 0.0;
  res.passed = smallest > 0.0;
  res.runtime_seconds = seconds_since(start);
  return res;
}

// ---- decoupling -------------------------------------------------------------

ExperimentResult decoupling_check(const DecouplingPlan& plan) {
  const auto start = Clock::now();
  validate_replications(plan.M);
  validate_u_grid(plan.u_grid);
  const int d = plan.h.order();
  if (d < 1 || d > 3) throw InvalidConfiguration("decoupling: d must lie in 1..3");
  if (plan.n < 1 || plan.n > 50) throw InvalidConfiguration("decoupling: n must lie in 1..50");
  const std::size_t A = plan.probabilities.size();
  if (A == 0 || plan.h.side() != A) throw InvalidConfiguration("decoupling: h must be indexed by the atoms");
  for (double p : plan.probabilities)
    if (!(p >= 0.0) || !std::isfinite(p)) throw InvalidConfiguration("decoupling: probabilities must be >= 0");

  std::vector<double> coupled(plan.M), decoupled(plan.M);
  const std::size_t n = plan.n;
  parallel_for(plan.M, plan.threads, [&](std::size_t r) {
    Rng rng = make_stream(plan.seed, r);
    std::discrete_distribution<std::size_t> law(plan.probabilities.begin(), plan.probabilities.end());
    std::vector<double> counts(A, 0.0);
    for (std::size_t i = 0; i < n; ++i) counts[law(rng)] += 1.0;
    coupled[r] = factorial_integral(plan.h, counts);

    std::vector<std::vector<std::size_t>> copies(static_cast<std::size_t>(d), std::vector<std::size_t>(n));
    for (auto& copy : copies)
      for (auto& x : copy) x = law(rng);
    double s = 0.0;
    for_each_factorial_tuple(n, d, [&](std::span<const std::size_t> idx) {
      std::size_t flat = 0;
      for (std::size_t a = 0; a < idx.size(); ++a) flat = flat * A + copies[a][idx[a]];
      s += plan.h[flat];
    });
    decoupled[r] = s;
  });

  ExperimentResult res;
  res.name = "decoupling";
  res.seed = plan.seed;
  res.replications = plan.M;
  res.values = coupled;
  res.curve = tail_curve(coupled, plan.u_grid);
  res.secondary_curve = tail_curve(decoupled, plan.u_grid);

  auto holds = [&](double C) {
    for (double u : plan.u_grid) {
      if (tail_frequency(coupled, u) > C * tail_frequency(decoupled, u / C)) return false;
      if (tail_frequency(decoupled, u) > C * tail_frequency(coupled, u / C)) return false;
    }
    return true;
  };
  double smallest = kNaN;
  if (holds(1.0)) {
    smallest = 1.0;
  } else if (holds(64.0)) {
    double lo = 1.0, hi = 64.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (holds(mid) ? hi : lo) = mid;
    }
    smallest = hi;
  }
  res.scalars["smallest_C"] = smallest;
  res.passed = !std::isnan(smallest);
  res.runtime_seconds = seconds_since(start);
  return res;
}

// ---- LIL trajectories -------------------------------------------------------

LilResult lil_trajectory(const LilPlan& plan) {
  const auto start = Clock::now();
  const auto& g = plan.kernel;
  g.validate();
  const int d = g.order();
  if (d < 1 || d > 2) throw SizeError("lil_trajectory: d must be 1 or 2");
  if (plan.first_level < 2 || plan.last_level < plan.first_level || plan.last_level > 40) {
    throw InvalidConfiguration("lil_trajectory: need 2 <= first_level <= last_level <= 40");
  }
  if (plan.seeds < 1) throw InvalidConfiguration("lil_trajectory: seeds must be >= 1");
  const double mass = g.grid.total_mass();
  if (std::ldexp(1.0, plan.last_level) * mass > 1e7) throw SizeError("lil_trajectory: expected point budget 1e7 exceeded");

  LilResult res;
  res.order = d;
  res.degeneracy_order = degeneracy_order(g);
  const int m = res.degeneracy_order;
  if (m > 0) {
    res.cluster_set = lil_cluster_set(project_kernel(g, m));
    const double scale = binomial(d, m);
    res.cluster_set.lower *= scale;
    res.cluster_set.upper *= scale;
  }
  const double integral_g = integral(g);
  const std::size_t R = g.side();
  res.trajectories.resize(plan.seeds);

  parallel_for(plan.seeds, plan.threads, [&](std::size_t s) {
    Rng rng = make_stream(plan.seed, s);
    std::discrete_distribution<std::size_t> cell_law(g.grid.weights.begin(), g.grid.weights.end());
    std::vector<double> counts(R, 0.0);
    double U = 0.0, t_prev = 0.0;
    auto& traj = res.trajectories[s];
    for (int j = plan.first_level; j <= plan.last_level; ++j) {
      const double t = std::ldexp(1.0, j);
      std::poisson_distribution<long long> arrivals((t - t_prev) * mass);
      const long long k = arrivals(rng);
      for (long long a = 0; a < k; ++a) {
        const std::size_t i = cell_law(rng);
        if (d == 1) {
          U += g.values[i];
        } else {
          const double* row = g.values.data().data() + i * R;
          double s2 = 0.0;
          for (std::size_t c = 0; c < R; ++c) s2 += row[c] * counts[c];
          U += 2.0 * s2;
        }
        counts[i] += 1.0;
      }
      t_prev = t;
      LilPoint p;
      p.t = t;
      p.centered = U - pow_int(t, d) * integral_g;
      const double ll = 2.0 * std::log(std::log(t));
      p.integral_norm = p.centered / std::pow(t * ll, d / 2.0);
      p.first_order_norm = p.centered / (std::pow(t, d - 0.5) * std::sqrt(ll));
      p.ustat_norm = m > 0 ? p.centered / (std::pow(t, d - m / 2.0) * std::pow(ll, m / 2.0)) : 0.0;
      traj.push_back(p);
    }
  });
  for (const auto& traj : res.trajectories) {
    double mi = 0.0, mu = 0.0;
    for (const auto& p : traj) {
      mi = std::max(mi, std::abs(p.integral_norm));
      mu = std::max(mu, std::abs(p.ustat_norm));
    }
    res.running_max_integral.push_back(mi);
    res.running_max_ustat.push_back(mu);
  }
  res.runtime_seconds = seconds_since(start);
  return res;
}

// ---- variance / isometry ----------------------------------------------------

ExperimentResult variance_check(const VariancePlan& plan) {
  const auto start = Clock::now();
  validate_replications(plan.M, 2);
  if (!(plan.t > 0.0)) throw InvalidConfiguration("t must be > 0");
  const auto& g = plan.kernel;
  g.validate();
  ExperimentResult res;
  res.name = "variance_check";
  res.seed = plan.seed;
  res.replications = plan.M;
  res.values.assign(plan.M, 0.0);
  parallel_for(plan.M, plan.threads, [&](std::size_t i) {
    res.values[i] = ustat_from_counts(g, semi_discrete_counts(g.grid, plan.t, derive_seed(plan.seed, i)));
  });
  const auto m = sample_moments(res.values);
  const double theory = ustat_variance(g, plan.t);
  const double se = variance_standard_error(m);
  const double z = se > 0.0 ? (m.variance - theory) / se : (m.variance == theory ? 0.0 : kNaN);
  res.scalars["empirical_mean"] = m.mean;
  res.scalars["theoretical_mean"] = ustat_mean(g, plan.t);
  res.scalars["empirical"] = m.variance;
  res.scalars["theoretical"] = theory;
  res.scalars["standard_error"] = se;
  res.scalars["z"] = z;
  res.passed = !std::isnan(z) && std::abs(z) <= plan.z_limit;
  res.runtime_seconds = seconds_since(start);
  return res;
}

ExperimentResult isometry_check(const IsometryPlan& plan) {
  const auto start = Clock::now();
  validate_replications(plan.M, 2);
  if (!(plan.T > 0.0)) throw InvalidConfiguration("T must be > 0");
  const auto& k = plan.kernel;
  const auto dec = chaos_expand(k);
  ExperimentResult res;
  res.name = "isometry_check";
  res.seed = plan.seed;
  res.replications = plan.M;
  res.values.assign(plan.M, 0.0);
  parallel_for(plan.M, plan.threads, [&](std::size_t i) {
    const auto cc = compensate(k.grid, semi_discrete_counts(k.grid, plan.T, derive_seed(plan.seed, i)), plan.T);
    require_identity(dec, cc);
    res.values[i] = wiener_ito_step(k, cc);
  });
  const auto m = sample_moments(res.values);
  const double norm = l2_norm(k.as_discrete());
  const double theory = factorial(k.order()) * pow_int(plan.T, k.order()) * norm * norm;
  const double se_var = variance_standard_error(m);
  const double se_mean = mean_standard_error(m);
  const double z_var = se_var > 0.0 ? (m.variance - theory) / se_var : (m.variance == theory ? 0.0 : kNaN);
  const double z_mean = se_mean > 0.0 ? m.mean / se_mean : (m.mean == 0.0 ? 0.0 : kNaN);
  res.scalars["empirical_mean"] = m.mean;
  res.scalars["empirical_variance"] = m.variance;
  res.scalars["theoretical_variance"] = theory;
  res.scalars["z_mean"] = z_mean;
  res.scalars["z_variance"] = z_var;
  res.passed = !std::isnan(z_var) && !std::isnan(z_mean) && std::abs(z_var) <= plan.z_limit &&
               std::abs(z_mean) <= plan.z_limit;
  res.runtime_seconds = seconds_since(start);
  return res;
}

void write_tail_curve_csv(std::ostream& os, const std::vector<TailCurvePoint>& curve) {
  write_csv_row(os, {"u", "hits", "frequency", "wilson_lo", "wilson_hi", "bound", "regime"});
  for (const auto& p : curve) {
    write_csv_row(os, {format_double(p.u), std::to_string(p.hits), format_double(p.frequency), format_double(p.wilson.lo),
                       format_double(p.wilson.hi), format_double(p.bound), p.regime});
  }
}

void write_lil_csv(std::ostream& os, const LilResult& result) {
  write_csv_row(os, {"seed_index", "t", "centered", "integral_norm", "ustat_norm", "first_order_norm"});
  for (std::size_t s = 0; s < result.trajectories.size(); ++s) {
    for (const auto& p : result.trajectories[s]) {
      write_csv_row(os, {std::to_string(s), format_double(p.t), format_double(p.centered), format_double(p.integral_norm),
                         format_double(p.ustat_norm), format_double(p.first_order_norm)});
    }
  }
}

}  // namespace poisson_chaos
