#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "poisson_chaos/kernels.hpp"
#include "poisson_chaos/norms.hpp"

namespace poisson_chaos {

// Evaluated right-hand side of a tail inequality. `regime` names the term
// attaining the minimum in the exponent.
struct TailBound {
  double value = 2.0;
  double exponent = 0.0;  // the minimum, before multiplying by c
  std::string regime;
  bool zero_kernel = false;
};

// Universal constants are never known; callers pass them explicitly.
struct BoundConstants {
  double c = 1.0;  // tail constant c_d
  double C = 1.0;  // moment constant C_d
};

TailBound integral_tail_bound(const NormTable& table, double T, double u, double c = 1.0);
double integral_moment_bound(const NormTable& table, double T, double p, double C = 1.0);

// B = (B_0, ..., B_d).
TailBound simplified_tail_bound(std::span<const double> B, double T, double u, double c = 1.0);
double simplified_moment_bound(std::span<const double> B, double T, double p, double C = 1.0);

// tables[n-1] is the norm table of g_n (order n), n = 1..d.
TailBound ustat_tail_bound(const std::vector<NormTable>& tables, double T, double u, double c = 1.0);
double ustat_moment_bound(const std::vector<NormTable>& tables, double T, double p, double C = 1.0);
// Sum_n T^{2d-n} ||g_n||_2^2: the Gaussian-regime denominator of the U-statistic bound.
double ustat_gaussian_scale(const std::vector<NormTable>& tables, double T);

TailBound subgraph_tail_bound(double variance, double t, double B_dr, int d, double u, double c = 1.0);

// A_{gamma,p} = int r^gamma(x) lambda^p(B(x, beta r(x))) dlambda(x); B_{gamma,p} the sup of the integrand.
double power_length_A(const PowerLengthKernel& k, const Grid& grid, double gamma, double p);
double power_length_B(const PowerLengthKernel& k, const Grid& grid, double gamma, double p);

struct PowerLengthQuantities {
  double A_2a_2 = 0.0;   // A_{2 alpha, 2}
  double A_2a_1 = 0.0;   // A_{2 alpha, 1}
  double B_a_1 = 0.0;    // B_{alpha, 1}
  double B_2a3_13 = 0.0; // B_{2 alpha / 3, 1 / 3}
  double B_a2_0 = 0.0;   // B_{alpha / 2, 0}
};
PowerLengthQuantities power_length_quantities(const PowerLengthKernel& k, const Grid& grid);
double power_length_variance_bound(const PowerLengthQuantities& q, double t, double beta, double alpha, double C = 1.0);
TailBound power_length_bound(const PowerLengthQuantities& q, double t, double u, double beta, double alpha,
                             double c = 1.0, double C = 1.0);

double ou_g1_norm_sq(double c_nu_sq, double rho, double T);
double ou_g2_norm_sq(double rho, double T);
double ou_variance_bound(double c_nu_sq, double rho, double T);
TailBound ou_bound(double rho, double A, double c_nu_sq, double T, double u, double c = 1.0);

// ||g||_{L1(X^{I^c}, L2(X^I))} on the grid; I is a subset of 1..d (1-based).
double mixed_l1_l2_norm(const DiscreteKernel& g, const std::vector<int>& I);
double polynomial_tail_bound(const DiscreteKernel& g, const std::vector<int>& I, double T, double u, double C = 1.0);

// Extremes of { int g phi^{(x)d} : ||phi||_2 <= 1 }.
struct ClusterSet {
  int order = 0;
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> direction;  // phi on the grid cells attaining `upper`
  int degeneracy_order = 0;       // min{n : g_n != 0}; 0 when g == 0
};

// d <= 3; d = 2 uses a dense symmetric eigensolve, d = 3 shifted symmetric power iteration.
ClusterSet lil_cluster_set(const DiscreteKernel& g, int restarts = 32, std::uint64_t seed = 0xC1u);
int degeneracy_order(const DiscreteKernel& g, double relative_threshold = 1e-12);

// Eigenvalues (ascending) and eigenvectors (columns, row-major n x n) by cyclic Jacobi.
struct SymmetricEigen {
  std::vector<double> values;
  std::vector<double> vectors;
};
SymmetricEigen jacobi_eigen(std::vector<double> a, std::size_t n);

struct BoundCurvePoint {
  double u = 0.0;
  double bound = 0.0;
  std::string regime;
};
void write_bound_curve_csv(std::ostream& os, const std::vector<BoundCurvePoint>& curve);

}  // namespace poisson_chaos
