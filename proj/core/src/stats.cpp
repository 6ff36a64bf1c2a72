#include "poisson_chaos/stats.hpp"

#include <algorithm>
#include <cmath>

#include "poisson_chaos/error.hpp"

namespace poisson_chaos {

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) throw InvalidArgument("wilson_interval: trials must be >= 1");
  if (successes > trials) throw InvalidArgument("wilson_interval: successes > trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double poisson_pmf(long long k, double mean) {
  if (k < 0) return 0.0;
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(static_cast<double>(k) * std::log(mean) - mean - std::lgamma(static_cast<double>(k) + 1.0));
}

double poisson_cdf(long long k, double mean) {
  if (k < 0) return 0.0;
  double s = 0.0;
  for (long long j = 0; j <= k; ++j) s += poisson_pmf(j, mean);
  return std::min(1.0, s);
}

double poisson_two_sided_tail(double mean, double u) {
  if (!(mean >= 0.0)) throw DomainError("poisson tail: mean must be >= 0");
  // |N - mean| < u  <=>  mean - u < N < mean + u
  const double lo = mean - u, hi = mean + u;
  long long kmin = static_cast<long long>(std::floor(lo)) + 1;
  long long kmax = static_cast<long long>(std::ceil(hi)) - 1;
  kmin = std::max(kmin, 0LL);
  double inside = 0.0;
  for (long long k = kmin; k <= kmax; ++k) inside += poisson_pmf(k, mean);
  return std::clamp(1.0 - inside, 0.0, 1.0);
}

SampleMoments sample_moments(std::span<const double> xs) {
  SampleMoments m;
  m.n = xs.size();
  if (m.n == 0) return m;
  double s = 0.0;
  for (double x : xs) s += x;
  m.mean = s / static_cast<double>(m.n);
  double s2 = 0.0, s4 = 0.0;
  for (double x : xs) {
    const double d = x - m.mean;
    s2 += d * d;
    s4 += d * d * d * d;
  }
  m.variance = m.n > 1 ? s2 / static_cast<double>(m.n - 1) : 0.0;
  m.m4 = s4 / static_cast<double>(m.n);
  return m;
}

double mean_standard_error(const SampleMoments& m) {
  if (m.n < 2) return 0.0;
  return std::sqrt(m.variance / static_cast<double>(m.n));
}

double variance_standard_error(const SampleMoments& m) {
  if (m.n < 4) return 0.0;
  const double n = static_cast<double>(m.n);
  const double v = m.m4 - (n - 3.0) / (n - 1.0) * m.variance * m.variance;
  return std::sqrt(std::max(v, 0.0) / n);
}

}  // namespace poisson_chaos
