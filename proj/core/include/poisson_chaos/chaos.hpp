#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "poisson_chaos/kernels.hpp"
#include "poisson_chaos/point_process.hpp"

namespace poisson_chaos {

// N_i(t) and N_i(t) - t * lambda(A_i) per grid cell, computed once per (sample, t).
struct CompensatedCounts {
  double t = 0.0;
  std::vector<double> counts;
  std::vector<double> compensated;
};

CompensatedCounts compensated_counts(const Grid& grid, std::span<const std::int32_t> cells,
                                     std::span<const double> times, double t);
CompensatedCounts compensated_counts(const Grid& grid, const SpatioTemporalSample& sample, double t);

// Product formula; valid because step coefficients vanish on diagonals.
double wiener_ito_step(const StepKernel& h, const CompensatedCounts& cc);
double wiener_ito_step(const StepKernel& h, const SpatioTemporalSample& sample, double t);

// sum_{i in [R]^k} F(i) prod_c (N_c)_(m_c): the factorial-measure integral of a
// cell function, m_c being the multiplicity of cell c in the index tuple.
double factorial_integral(const Tensor& f, std::span<const double> counts);

// I^(n)(f) for symmetric f with arbitrary diagonal values, by inclusion-exclusion
// over factorial measures and the compensator t * lambda.
double multiple_integral(const DiscreteKernel& f, const CompensatedCounts& cc);

// U-statistics. The count form identifies points with their cells.
double ustat_from_counts(const DiscreteKernel& g, std::span<const double> counts);
// Direct enumeration over ordered tuples of distinct points up to time t.
double ustat(const DiscreteKernel& g, const SpatioTemporalSample& sample, double t);
double ustat(const AnalyticKernel& g, const SpatioTemporalSample& sample, double t);
double ustat(const AnalyticKernel& g, const MarkedSample& sample, double t);

double ustat_mean(const DiscreteKernel& g, double t);
double ustat_variance(const DiscreteKernel& g, double t);

struct ChaosDecomposition {
  int order = 0;
  std::vector<DiscreteKernel> kernels;  // kernels[n-1] = g_n; kernels[d-1] = g
  double mean_coefficient = 0.0;        // integral of g against lambda^d
  std::vector<double> binomial_weights; // C(d, n), n = 1..d

  const DiscreteKernel& g(int n) const { return kernels.at(static_cast<std::size_t>(n - 1)); }
};

ChaosDecomposition chaos_expand(const DiscreteKernel& g);
ChaosDecomposition chaos_expand(const StepKernel& g);

struct ChaosEvaluation {
  double t = 0.0;
  double ustat = 0.0;
  double mean = 0.0;
  std::vector<double> integrals;  // I^(n)(g_n), n = 1..d
  double residual = 0.0;
};

ChaosEvaluation evaluate_chaos(const StepKernel& g, const ChaosDecomposition& dec, const SpatioTemporalSample& sample,
                               double t);
double chaos_identity_residual(const StepKernel& g, const SpatioTemporalSample& sample, double t);

// Throws IdentityViolation when |residual| > tol * (1 + |U|).
void require_chaos_identity(const ChaosEvaluation& ev, double tol = 1e-9);

void write_chaos_trace_csv(std::ostream& os, const std::vector<ChaosEvaluation>& rows);

}  // namespace poisson_chaos
