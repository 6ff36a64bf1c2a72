#pragma once

#include <cstddef>
#include <span>

namespace poisson_chaos {

inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool contains(double x) const { return lo <= x && x <= hi; }
};

Interval wilson_interval(std::size_t successes, std::size_t trials, double z = kZ95);

double poisson_pmf(long long k, double mean);
// P(N <= k).
double poisson_cdf(long long k, double mean);
// P(|N - mean| >= u) for N ~ Poisson(mean).
double poisson_two_sided_tail(double mean, double u);

struct SampleMoments {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double m4 = 0.0;        // fourth central moment (biased)
};

SampleMoments sample_moments(std::span<const double> xs);
double mean_standard_error(const SampleMoments& m);
// Large-sample standard error of the unbiased variance estimator.
double variance_standard_error(const SampleMoments& m);

}  // namespace poisson_chaos
