#include "poisson_chaos/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "poisson_chaos/error.hpp"

namespace poisson_chaos {

double distance(Metric metric, std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("distance: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = std::abs(a[i] - b[i]);
    if (metric == Metric::torus) {
      d -= std::floor(d);
      d = std::min(d, 1.0 - d);
    }
    s += d * d;
  }
  return std::sqrt(s);
}

double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

// ---- graphs ---------------------------------------------------------------

Graph Graph::complete(int n) {
  Graph g;
  g.vertices = n;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) g.edges.emplace_back(a, b);
  g.name = "K" + std::to_string(n);
  return g;
}

Graph Graph::path(int edges) {
  Graph g;
  g.vertices = edges + 1;
  for (int a = 0; a < edges; ++a) g.edges.emplace_back(a, a + 1);
  g.name = "path_" + std::to_string(edges);
  return g;
}

Graph Graph::star(int leaves) {
  Graph g;
  g.vertices = leaves + 1;
  for (int a = 1; a <= leaves; ++a) g.edges.emplace_back(0, a);
  g.name = "star_" + std::to_string(leaves);
  return g;
}

Graph Graph::named(const std::string& raw) {
  std::string s;
  for (char c : raw) {
    if (c != '_') s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (s == "triangle") s = "k3";
  if (s == "edge") s = "k2";
  auto suffix = [&](std::size_t at) -> int {
    if (at >= s.size()) return -1;
    for (std::size_t i = at; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return -1;
    return std::stoi(s.substr(at));
  };
  if (s.rfind("k", 0) == 0) {
    const int n = suffix(1);
    if (n >= 2 && n <= 4) return complete(n);
  } else if (s.rfind("path", 0) == 0) {
    const int e = suffix(4);
    if (e >= 1 && e <= 3) return path(e);
  } else if (s.rfind("star", 0) == 0) {
    const int k = suffix(4);
    if (k >= 1 && k <= 4) return star(k);
  }
  throw InvalidArgument("unsupported graph '" + raw + "' (K2..K4, path_1..path_3, star_1..star_4)");
}

bool Graph::adjacent(int a, int b) const {
  return std::any_of(edges.begin(), edges.end(), [&](const auto& e) {
    return (e.first == a && e.second == b) || (e.first == b && e.second == a);
  });
}

bool Graph::connected() const {
  if (vertices <= 1) return true;
  std::vector<char> seen(static_cast<std::size_t>(vertices), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w = 0; w < vertices; ++w) {
      if (!seen[static_cast<std::size_t>(w)] && adjacent(v, w)) {
        seen[static_cast<std::size_t>(w)] = 1;
        stack.push_back(w);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

long long automorphism_count(const Graph& h) {
  if (h.vertices < 1 || h.vertices > 8) throw SizeError("automorphism_count: 1 <= |V(H)| <= 8");
  long long count = 0;
  for (const auto& p : permutations(h.vertices)) {
    bool ok = true;
    for (const auto& [a, b] : h.edges) {
      if (!h.adjacent(p[static_cast<std::size_t>(a)], p[static_cast<std::size_t>(b)])) {
        ok = false;
        break;
      }
    }
    if (ok) ++count;  // edge-preserving bijection on a finite graph preserves non-edges too
  }
  return count;
}

// ---- analytic kernels ------------------------------------------------------

double RadiusFunction::operator()(std::span<const double> x) const {
  if (kind == Kind::constant) return r0;
  double n2 = 0.0;
  for (double v : x) n2 += v * v;
  return r0 * std::pow(1.0 + std::sqrt(n2), -exponent);
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::size_t atom_index(const std::vector<double>& atoms, double y) {
  auto it = std::find(atoms.begin(), atoms.end(), y);
  if (it == atoms.end()) throw DomainError("product-mark kernel: mark not among atoms");
  return static_cast<std::size_t>(it - atoms.begin());
}

}  // namespace

int kernel_order(const AnalyticKernel& kernel) {
  return std::visit(overloaded{[](const SubgraphKernel& k) { return k.graph.vertices; },
                               [](const PowerLengthKernel&) { return 2; },
                               [](const OUOrder1Kernel&) { return 1; },
                               [](const OUOrder2Kernel&) { return 2; },
                               [](const ProductMarkKernel&) { return 2; },
                               [](const ConstantKernel& k) { return k.order; }},
                    kernel);
}

int point_dim(const AnalyticKernel& kernel) {
  return std::visit(overloaded{[](const SubgraphKernel& k) { return k.dim; },
                               [](const PowerLengthKernel& k) { return k.dim; },
                               [](const OUOrder1Kernel&) { return 2; },
                               [](const OUOrder2Kernel&) { return 2; },
                               [](const ProductMarkKernel& k) { return k.dim + 1; },
                               [](const ConstantKernel& k) { return k.dim; }},
                    kernel);
}

std::string kernel_name(const AnalyticKernel& kernel) {
  return std::visit(overloaded{[](const SubgraphKernel& k) { return "subgraph(" + k.graph.name + ")"; },
                               [](const PowerLengthKernel&) { return std::string("power_length"); },
                               [](const OUOrder1Kernel&) { return std::string("ou_order1"); },
                               [](const OUOrder2Kernel&) { return std::string("ou_order2"); },
                               [](const ProductMarkKernel&) { return std::string("product_mark"); },
                               [](const ConstantKernel&) { return std::string("constant"); }},
                    kernel);
}

void validate(const AnalyticKernel& kernel) {
  std::visit(overloaded{
                 [](const SubgraphKernel& k) {
                   if (k.graph.vertices < 1 || k.graph.vertices > 8) throw InvalidConfiguration("subgraph: 1..8 vertices");
                   if (!k.graph.connected()) throw InvalidConfiguration("subgraph: H must be connected");
                   if (!(k.radius > 0.0)) throw InvalidConfiguration("subgraph: radius must be > 0");
                   if (k.dim < 1) throw InvalidConfiguration("subgraph: dim must be >= 1");
                 },
                 [](const PowerLengthKernel& k) {
                   if (!(k.alpha >= 0.0)) throw InvalidConfiguration("power_length: alpha must be >= 0");
                   if (!(k.beta >= 2.0)) throw InvalidConfiguration("power_length: beta must be >= 2");
                   if (!(k.radius.r0 > 0.0)) throw InvalidConfiguration("power_length: radius must be > 0");
                   if (k.radius.exponent < 0.0) throw InvalidConfiguration("power_length: decay exponent must be >= 0");
                   if (k.dim < 1) throw InvalidConfiguration("power_length: dim must be >= 1");
                 },
                 [](const OUOrder1Kernel& k) {
                   if (!(k.rho > 0.0) || !(k.horizon > 0.0)) throw InvalidConfiguration("ou: rho and T must be > 0");
                 },
                 [](const OUOrder2Kernel& k) {
                   if (!(k.rho > 0.0) || !(k.horizon > 0.0)) throw InvalidConfiguration("ou: rho and T must be > 0");
                 },
                 [](const ProductMarkKernel& k) {
                   const std::size_t a = k.atoms.size();
                   if (a == 0 || k.h.size() != a * a) throw InvalidConfiguration("product_mark: h must be atoms x atoms");
                   for (std::size_t i = 0; i < a; ++i)
                     for (std::size_t j = 0; j < a; ++j)
                       if (k.h[i * a + j] != k.h[j * a + i]) throw InvalidConfiguration("product_mark: h must be symmetric");
                   if (!(k.radius > 0.0)) throw InvalidConfiguration("product_mark: radius must be > 0");
                 },
                 [](const ConstantKernel& k) {
                   if (k.order < 1) throw InvalidConfiguration("constant: order must be >= 1");
                 }},
             kernel);
}

double ou_f1(double rho, double T, double x) {
  if (x > T) return 0.0;
  if (x <= 0.0) return std::exp(2.0 * rho * x) * (1.0 - std::exp(-2.0 * rho * T));
  return 1.0 - std::exp(2.0 * rho * (x - T));
}

double ou_f2(double rho, double T, double x1, double x2) {
  if (x1 > T || x2 > T) return 0.0;
  const double m = std::max(x1, x2);
  const double inner = m <= 0.0 ? 1.0 - std::exp(-2.0 * rho * T) : std::exp(-2.0 * rho * m) - std::exp(-2.0 * rho * T);
  return std::exp(rho * (x1 + x2)) * inner;
}

double ou_truncation(double rho, double T, double tol) {
  if (!(rho > 0.0) || !(T > 0.0) || !(tol > 0.0)) throw InvalidConfiguration("ou: rho, T, tol must be > 0");
  return std::max(0.0, -std::log(2.0 * rho * tol * T) / (2.0 * rho));
}

Grid ou_grid(double rho, double T, double step, double tol) {
  if (!(step > 0.0)) throw InvalidConfiguration("ou: grid step must be > 0");
  const double L = ou_truncation(rho, T, tol);
  const auto left = static_cast<std::size_t>(std::ceil(L / step - 1e-9));
  const auto right = static_cast<std::size_t>(std::llround(T / step));
  if (std::abs(static_cast<double>(right) * step - T) > 1e-9 * T) {
    throw InvalidConfiguration("ou: T must be a multiple of the grid step");
  }
  const double lo = -static_cast<double>(left) * step;
  Grid base = Grid::interval(lo, T, left + right);
  return Grid::with_atoms(base, {1.0}, {1.0});
}

double eval(const AnalyticKernel& kernel, std::span<const double> points) {
  const auto pd = static_cast<std::size_t>(point_dim(kernel));
  const auto order = static_cast<std::size_t>(kernel_order(kernel));
  if (points.size() != pd * order) throw InvalidArgument("eval: wrong arity for " + kernel_name(kernel));
  auto arg = [&](std::size_t i) { return points.subspan(i * pd, pd); };
  return std::visit(
      overloaded{
          [&](const SubgraphKernel& k) {
            for (const auto& [a, b] : k.graph.edges) {
              if (distance(k.metric, arg(static_cast<std::size_t>(a)), arg(static_cast<std::size_t>(b))) > k.radius) return 0.0;
            }
            return 1.0;
          },
          [&](const PowerLengthKernel& k) {
            const double d = distance(k.metric, arg(0), arg(1));
            if (d > k.radius(arg(0)) + k.radius(arg(1))) return 0.0;
            return k.alpha == 0.0 ? 1.0 : std::pow(d, k.alpha);
          },
          [&](const OUOrder1Kernel& k) {
            const double u = points[1];
            return u * u * ou_f1(k.rho, k.horizon, points[0]);
          },
          [&](const OUOrder2Kernel& k) {
            return points[1] * points[3] * ou_f2(k.rho, k.horizon, points[0], points[2]);
          },
          [&](const ProductMarkKernel& k) {
            const auto x1 = arg(0), x2 = arg(1);
            const std::size_t sd = pd - 1;
            if (distance(k.metric, x1.first(sd), x2.first(sd)) > k.radius) return 0.0;
            return k.h[atom_index(k.atoms, x1[sd]) * k.atoms.size() + atom_index(k.atoms, x2[sd])];
          },
          [&](const ConstantKernel& k) { return k.value; }},
      kernel);
}

// ---- discrete kernels -------------------------------------------------------

void DiscreteKernel::validate() const {
  grid.validate();
  if (values.order() < 1) throw InvalidConfiguration("kernel: order must be >= 1");
  if (values.side() != grid.size()) throw InvalidConfiguration("kernel: tensor side must equal grid size");
  for (double v : values.data())
    if (!std::isfinite(v)) throw InvalidConfiguration("kernel: entries must be finite");
}

StepKernel StepKernel::make(Grid grid, Tensor coeffs) {
  StepKernel k{std::move(grid), std::move(coeffs)};
  k.as_discrete().validate();
  for (std::size_t f = 0; f < k.coeffs.size(); ++f) {
    if (k.coeffs[f] != 0.0 && k.coeffs.on_diagonal(f)) {
      throw InvalidConfiguration("step kernel: coefficients must vanish on diagonals");
    }
  }
  const double tol = 1e-12 * std::max(1.0, k.coeffs.max_abs());
  if (!k.coeffs.is_symmetric(tol)) throw InvalidConfiguration("step kernel: coefficients must be symmetric");
  return k;
}

StepKernel symmetrize(const Grid& grid, const Tensor& coeffs) {
  for (std::size_t f = 0; f < coeffs.size(); ++f) {
    if (coeffs[f] != 0.0 && coeffs.on_diagonal(f)) {
      throw InvalidConfiguration("symmetrize: coefficients must vanish on diagonals");
    }
  }
  StepKernel k{grid, symmetrize(coeffs)};
  k.as_discrete().validate();
  return k;
}

DiscreteKernel symmetrize(const DiscreteKernel& kernel) { return {kernel.grid, symmetrize(kernel.values)}; }

DiscreteKernel discretize(const AnalyticKernel& kernel, const Grid& grid) {
  validate(kernel);
  grid.validate();
  if (grid.dim != point_dim(kernel)) {
    throw InvalidArgument("discretize: grid dimension " + std::to_string(grid.dim) + " does not match kernel point dimension " +
                          std::to_string(point_dim(kernel)));
  }
  if (const auto* pl = std::get_if<PowerLengthKernel>(&kernel); pl && !power_length_condition_holds(*pl, grid)) {
    throw InvalidConfiguration("power_length: radius function violates the beta growth condition on this grid");
  }
  const int d = kernel_order(kernel);
  const auto pd = static_cast<std::size_t>(grid.dim);
  Tensor t(d, grid.size());
  std::vector<std::size_t> idx(static_cast<std::size_t>(d));
  std::vector<double> pts(static_cast<std::size_t>(d) * pd);
  for (std::size_t f = 0; f < t.size(); ++f) {
    t.unflatten(f, idx);
    for (std::size_t a = 0; a < idx.size(); ++a) {
      auto m = grid.midpoint(idx[a]);
      std::copy(m.begin(), m.end(), pts.begin() + static_cast<std::ptrdiff_t>(a * pd));
    }
    t[f] = eval(kernel, pts);
  }
  // Subgraph kernels of non-complete H are not symmetric in their arguments.
  if (!t.is_symmetric(0.0)) t = symmetrize(t);
  return {grid, std::move(t)};
}

bool power_length_condition_holds(const PowerLengthKernel& k, const Grid& grid) {
  const double reach = 2.0 * k.radius.sup();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto x = grid.midpoint(i);
    const double rx = k.radius(x);
    double worst = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const auto y = grid.midpoint(j);
      if (distance(k.metric, x, y) <= reach) worst = std::max(worst, k.radius(y));
    }
    if (worst > (k.beta - 1.0) * rx * (1.0 + 1e-12)) return false;
  }
  return true;
}

DiscreteKernel project_kernel(const DiscreteKernel& kernel, int n) {
  const int d = kernel.order();
  if (n < 1 || n > d) throw RangeError("project_kernel: n must lie in 1..d");
  Tensor t = kernel.values;
  for (int j = d; j > n; --j) t = t.contract_last(kernel.grid.weights);
  return {kernel.grid, std::move(t)};
}

DiscreteKernel project_kernel(const StepKernel& kernel, int n) { return project_kernel(kernel.as_discrete(), n); }

StepConversion to_step_kernel(const DiscreteKernel& kernel) {
  kernel.validate();
  StepConversion out;
  Tensor t = kernel.values;
  for (std::size_t f = 0; f < t.size(); ++f) {
    if (t[f] != 0.0 && t.on_diagonal(f)) {
      const double w = weight_product(kernel.grid, t, f);
      out.dropped_mass += std::abs(t[f]) * w;
      out.dropped_l2_sq += t[f] * t[f] * w;
      t[f] = 0.0;
    }
  }
  if (!t.is_symmetric(1e-12 * std::max(1.0, t.max_abs()))) t = symmetrize(t);
  out.kernel = StepKernel{kernel.grid, std::move(t)};
  return out;
}

double weight_product(const Grid& grid, const Tensor& shape, std::size_t flat) {
  double w = 1.0;
  for (int a = 0; a < shape.order(); ++a) {
    w *= grid.weights[flat % shape.side()];
    flat /= shape.side();
  }
  return w;
}

double integral(const DiscreteKernel& kernel) {
  Tensor t = kernel.values;
  for (int j = kernel.order(); j > 0; --j) t = t.contract_last(kernel.grid.weights);
  return t[0];
}

double l2_norm(const DiscreteKernel& kernel) {
  double s = 0.0;
  const auto& v = kernel.values;
  for (std::size_t f = 0; f < v.size(); ++f) {
    if (v[f] != 0.0) s += v[f] * v[f] * weight_product(kernel.grid, v, f);
  }
  return std::sqrt(s);
}

}  // namespace poisson_chaos
