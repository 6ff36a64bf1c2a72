#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "poisson_chaos/grid.hpp"
#include "poisson_chaos/tensor.hpp"

namespace poisson_chaos {

enum class Metric { euclidean, torus };

// Torus metric is on the unit torus (side 1 along every axis).
double distance(Metric metric, std::span<const double> a, std::span<const double> b);

// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

struct Graph {
  int vertices = 0;
  std::vector<std::pair<int, int>> edges;

  // "K2".."K4" (also "K_3", "triangle"), "path_2" (two edges), "star_k" (k leaves).
  static Graph named(const std::string& name);
  static Graph complete(int n);
  static Graph path(int edges);
  static Graph star(int leaves);

  bool connected() const;
  bool adjacent(int a, int b) const;
  std::string name;
};

// Brute force over vertex permutations; |V| <= 8.
long long automorphism_count(const Graph& h);

struct RadiusFunction {
  enum class Kind { constant, power_decay } kind = Kind::constant;
  double r0 = 0.0;
  double exponent = 0.0;  // power_decay: r0 * (1 + |x|)^(-exponent)

  double operator()(std::span<const double> x) const;
  double sup() const { return r0; }
};

struct SubgraphKernel {
  Graph graph;
  double radius = 0.0;
  Metric metric = Metric::torus;
  int dim = 1;
};

struct PowerLengthKernel {
  double alpha = 0.0;
  RadiusFunction radius;
  double beta = 2.0;
  Metric metric = Metric::torus;
  int dim = 1;
};

// Points are (time x, jump size u).
struct OUOrder1Kernel {
  double rho = 1.0;
  double horizon = 1.0;
};
struct OUOrder2Kernel {
  double rho = 1.0;
  double horizon = 1.0;
};

// h(y1, y2) * 1{rho(x1, x2) <= r}; points are (x..., mark).
struct ProductMarkKernel {
  std::vector<double> atoms;
  std::vector<double> h;  // atoms.size()^2, symmetric
  double radius = 0.0;
  Metric metric = Metric::torus;
  int dim = 1;
};

struct ConstantKernel {
  int order = 1;
  double value = 1.0;
  int dim = 1;
};

using AnalyticKernel =
    std::variant<SubgraphKernel, PowerLengthKernel, OUOrder1Kernel, OUOrder2Kernel, ProductMarkKernel, ConstantKernel>;

int kernel_order(const AnalyticKernel& kernel);
// Coordinates per argument (location plus mark where applicable).
int point_dim(const AnalyticKernel& kernel);
std::string kernel_name(const AnalyticKernel& kernel);
// Throws InvalidConfiguration on out-of-domain parameters.
void validate(const AnalyticKernel& kernel);

// Arguments packed as order * point_dim coordinates.
double eval(const AnalyticKernel& kernel, std::span<const double> points);

double ou_f1(double rho, double horizon, double x);
double ou_f2(double rho, double horizon, double x1, double x2);
// Left truncation point: the discarded tail e^{-2 rho L}/(2 rho) stays below tol * T.
double ou_truncation(double rho, double horizon, double tol);
// [-L, T] with 0 and T on cell edges, times the jump law delta_1.
Grid ou_grid(double rho, double horizon, double step, double tol = 1e-6);

// Tensor over weighted grid cells; values symmetric.
struct DiscreteKernel {
  Grid grid;
  Tensor values;

  int order() const { return values.order(); }
  std::size_t side() const { return values.side(); }
  void validate() const;
};

// Simple kernel: symmetric coefficients vanishing on diagonals.
struct StepKernel {
  Grid grid;
  Tensor coeffs;

  static StepKernel make(Grid grid, Tensor coeffs);
  int order() const { return coeffs.order(); }
  std::size_t side() const { return coeffs.side(); }
  DiscreteKernel as_discrete() const { return {grid, coeffs}; }
};

// Average over permutations; zeroes nothing. Throws if input violates the
// diagonal precondition for step kernels.
StepKernel symmetrize(const Grid& grid, const Tensor& coeffs);
DiscreteKernel symmetrize(const DiscreteKernel& kernel);

// Midpoint rule, symmetrized.
DiscreteKernel discretize(const AnalyticKernel& kernel, const Grid& grid);

// Checks sup{r(x+v): |v| <= 2 sup r} <= (beta - 1) r(x) over grid midpoints.
bool power_length_condition_holds(const PowerLengthKernel& kernel, const Grid& grid);

// g_n: integrate out the trailing d - n arguments against the cell weights.
DiscreteKernel project_kernel(const DiscreteKernel& kernel, int n);
DiscreteKernel project_kernel(const StepKernel& kernel, int n);

struct StepConversion {
  StepKernel kernel;
  double dropped_mass = 0.0;     // sum |g| * prod w over diagonal entries
  double dropped_l2_sq = 0.0;    // squared weighted L2 of the diagonal part
};
StepConversion to_step_kernel(const DiscreteKernel& kernel);

// Sum g * prod w (the integral against lambda^d).
double integral(const DiscreteKernel& kernel);
// Weighted L2 norm.
double l2_norm(const DiscreteKernel& kernel);
// Row-major product of the cell weights at a flat index.
double weight_product(const Grid& grid, const Tensor& shape, std::size_t flat);

}  // namespace poisson_chaos
