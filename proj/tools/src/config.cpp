#include "poisson_chaos/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "poisson_chaos/cli/toml.hpp"
#include "poisson_chaos/error.hpp"

namespace poisson_chaos::cli {

using nlohmann::json;

namespace {

std::string join_errors(const std::vector<FieldError>& errors) {
  std::string s;
  for (const auto& e : errors) {
    if (!s.empty()) s += "\n";
    s += e.path + ": " + e.message;
  }
  return s;
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : path) {
    if (c == '.') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::string describe(const json& v) {
  if (v.is_string()) return "a string";
  if (v.is_boolean()) return "a boolean";
  if (v.is_array()) return "an array";
  if (v.is_object()) return "a table";
  return "a number";
}

Metric parse_metric(Fields& f, const std::string& path) {
  return f.choice(path, {"torus", "euclidean"}, "torus") == "euclidean" ? Metric::euclidean : Metric::torus;
}

std::vector<std::size_t> cells_field(Fields& f, const std::string& path, std::size_t dim) {
  const json* v = f.find(path);
  std::vector<std::size_t> out;
  if (v && v->is_array()) {
    for (const auto& x : *v) {
      if (!x.is_number_integer() || x.get<long long>() < 1) {
        f.error(path, "cell counts must be integers >= 1");
        return {};
      }
      out.push_back(x.get<std::size_t>());
    }
    if (out.size() != dim) f.error(path, "need one cell count per axis");
    return out;
  }
  const long long n = f.integer(path, std::nullopt, 1, 1 << 20);
  return std::vector<std::size_t>(dim, static_cast<std::size_t>(std::max(1LL, n)));
}

SpaceConfig parse_space(Fields& f, const std::string& p) {
  const std::string kind = f.choice(p + ".kind", {"torus", "box", "finite"});
  if (kind == "finite") {
    const auto w = f.numbers(p + ".weights");
    for (double x : w)
      if (!(x >= 0.0) || !std::isfinite(x)) {
        f.error(p + ".weights", "weights must be finite and >= 0");
        break;
      }
    return SpaceConfig::finite(w);
  }
  const double density = f.positive(p + ".density");
  if (kind == "box") {
    const auto sides = f.numbers(p + ".sides");
    if (sides.empty() && f.has(p + ".sides")) f.error(p + ".sides", "must be nonempty");
    for (double s : sides)
      if (!(s > 0.0) || !std::isfinite(s)) {
        f.error(p + ".sides", "sides must be finite and > 0");
        break;
      }
    return SpaceConfig::box(sides, density);
  }
  const auto dim = static_cast<int>(f.integer(p + ".dimension", 1, 1, 3));
  return SpaceConfig::torus(dim, density);
}

std::vector<double> positive_grid(Fields& f, const std::string& path) {
  auto u = f.numbers(path);
  if (f.has(path) && u.empty()) f.error(path, "must be nonempty");
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(u[i] > 0.0) || !std::isfinite(u[i])) {
      f.error(path, "values must be finite and > 0");
      break;
    }
    if (i && !(u[i] > u[i - 1])) {
      f.error(path, "values must be strictly increasing");
      break;
    }
  }
  return u;
}

template <class F>
auto guarded(Fields& f, const std::string& path, F&& make) -> decltype(make()) {
  try {
    return make();
  } catch (const std::exception& e) {
    f.error(path, e.what());
    return {};
  }
}

std::size_t replications(Fields& f, const std::string& path, long long min = 1) {
  return static_cast<std::size_t>(f.integer(path, std::nullopt, min, 1LL << 32));
}

StepKernel step_kernel(Fields& f, const KernelSpec& spec) {
  if (!f.ok()) return {};
  return guarded(f, "kernel", [&] {
    const auto conv = to_step_kernel(spec.kernel);
    return conv.kernel;
  });
}

ExperimentPlan parse_experiment(Fields& f, std::uint64_t seed, int threads) {
  const std::string kind = f.choice("plan.experiment", {"tail", "maximal", "decoupling", "lil", "variance", "isometry"});
  if (kind == "decoupling") {
    DecouplingPlan p;
    p.probabilities = f.numbers("plan.probabilities");
    const auto d = static_cast<int>(f.integer("plan.order", std::nullopt, 1, 3));
    const auto h = f.numbers("plan.h");
    p.n = static_cast<std::size_t>(f.integer("plan.n", std::nullopt, 1, 50));
    p.M = replications(f, "plan.M");
    p.u_grid = positive_grid(f, "plan.u");
    p.seed = seed;
    p.threads = threads;
    if (f.ok()) {
      p.h = guarded(f, "plan.h", [&] { return symmetrize(Tensor(d, p.probabilities.size(), h)); });
    }
    return p;
  }
  if (kind == "lil") {
    LilPlan p;
    p.first_level = static_cast<int>(f.integer("plan.first_level", 4, 2, 40));
    p.last_level = static_cast<int>(f.integer("plan.last_level", 20, 2, 40));
    if (p.last_level < p.first_level) f.error("plan.last_level", "must be >= plan.first_level");
    p.seeds = static_cast<std::size_t>(f.integer("plan.seeds", 10, 1, 100000));
    p.seed = seed;
    p.threads = threads;
    const auto spec = parse_kernel(f);
    if (f.ok() && spec.kernel.order() > 2) f.error("kernel", "trajectories need order 1 or 2");
    p.kernel = spec.kernel;
    return p;
  }
  if (kind == "variance") {
    VariancePlan p;
    p.t = f.positive("plan.t");
    p.M = replications(f, "plan.M", 2);
    p.z_limit = f.positive("plan.z_limit", 5.0);
    p.seed = seed;
    p.threads = threads;
    p.kernel = parse_kernel(f).kernel;
    return p;
  }
  if (kind == "isometry") {
    IsometryPlan p;
    p.T = f.positive("plan.T");
    p.M = replications(f, "plan.M", 2);
    p.z_limit = f.positive("plan.z_limit", 5.0);
    p.seed = seed;
    p.threads = threads;
    p.kernel = step_kernel(f, parse_kernel(f));
    return p;
  }
  if (kind == "maximal") {
    MaximalPlan p;
    p.T = f.positive("plan.T");
    p.M = replications(f, "plan.M");
    p.u_grid = positive_grid(f, "plan.u");
    p.grid_points = static_cast<std::size_t>(f.integer("plan.grid_points", 256, 2, 1 << 20));
    p.seed = seed;
    p.threads = threads;
    p.kernel = step_kernel(f, parse_kernel(f));
    return p;
  }
  TailPlan p;
  p.T = f.positive("plan.T");
  p.M = replications(f, "plan.M");
  p.u_grid = positive_grid(f, "plan.u");
  p.c = f.positive("plan.c", 1.0);
  p.statistic = f.choice("plan.statistic", {"integral", "ustat"}, "integral") == "ustat" ? TailStatistic::ustat
                                                                                        : TailStatistic::integral;
  const std::string fam = f.choice("plan.family", {"integral_tail", "simplified", "ustat_tail"}, "simplified");
  p.family = fam == "integral_tail" ? BoundFamily::integral_tail
             : fam == "ustat_tail"  ? BoundFamily::ustat_tail
                                    : BoundFamily::simplified;
  p.seed = seed;
  p.threads = threads;
  p.kernel = step_kernel(f, parse_kernel(f));
  return p;
}

}  // namespace

ConfigError::ConfigError(std::vector<FieldError> errs) : std::runtime_error(join_errors(errs)), errors(std::move(errs)) {}

json load_document(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("--config", "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (path.extension() == ".json") {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(path.string(), e.what());
    }
  }
  try {
    return parse_toml(text);
  } catch (const ParseError& e) {
    throw ConfigError(path.string(), e.what());
  }
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--set", "expected key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value;
  try {
    value = parse_toml_value(raw);
  } catch (const ParseError&) {
    value = raw;
  }
  json* t = &doc;
  const auto parts = split_path(key);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (parts[i].empty()) throw ConfigError("--set", "empty key segment in '" + key + "'");
    json& next = (*t)[parts[i]];
    if (next.is_null()) next = json::object();
    if (!next.is_object()) throw ConfigError(key, "'" + parts[i] + "' is not a table");
    t = &next;
  }
  if (parts.back().empty()) throw ConfigError("--set", "empty key segment in '" + key + "'");
  (*t)[parts.back()] = value;
}

const json* Fields::find(const std::string& path) const {
  const json* t = &root_;
  for (const auto& part : split_path(path)) {
    if (!t->is_object()) return nullptr;
    auto it = t->find(part);
    if (it == t->end()) return nullptr;
    t = &*it;
  }
  return t;
}

double Fields::number(const std::string& path, std::optional<double> fallback) {
  const json* v = find(path);
  if (!v) {
    if (!fallback) error(path, "required");
    return fallback.value_or(0.0);
  }
  if (!v->is_number()) {
    error(path, "expected a number, got " + describe(*v));
    return fallback.value_or(0.0);
  }
  return v->get<double>();
}

double Fields::positive(const std::string& path, std::optional<double> fallback) {
  const std::size_t before = errors_.size();
  const double v = number(path, fallback);
  if (errors_.size() == before && (!(v > 0.0) || !std::isfinite(v))) error(path, "must be finite and > 0");
  return v;
}

long long Fields::integer(const std::string& path, std::optional<long long> fallback, long long lo, long long hi) {
  const json* v = find(path);
  if (!v) {
    if (!fallback) error(path, "required");
    return fallback.value_or(lo);
  }
  if (!v->is_number_integer()) {
    error(path, "expected an integer, got " + describe(*v));
    return fallback.value_or(lo);
  }
  const long long x = v->get<long long>();
  if (x < lo || x > hi) {
    error(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return fallback.value_or(lo);
  }
  return x;
}

std::string Fields::string(const std::string& path, std::optional<std::string> fallback) {
  const json* v = find(path);
  if (!v) {
    if (!fallback) error(path, "required");
    return fallback.value_or("");
  }
  if (!v->is_string()) {
    error(path, "expected a string, got " + describe(*v));
    return fallback.value_or("");
  }
  return v->get<std::string>();
}

std::string Fields::choice(const std::string& path, const std::vector<std::string>& options,
                           std::optional<std::string> fallback) {
  const std::size_t before = errors_.size();
  const std::string s = string(path, fallback);
  if (errors_.size() != before) return fallback.value_or("");
  for (const auto& o : options)
    if (o == s) return s;
  std::string list;
  for (const auto& o : options) list += (list.empty() ? "" : ", ") + o;
  error(path, "'" + s + "' is not one of: " + list);
  return fallback.value_or("");
}

std::vector<double> Fields::numbers(const std::string& path, std::optional<std::vector<double>> fallback) {
  const json* v = find(path);
  if (!v) {
    if (!fallback) error(path, "required");
    return fallback.value_or(std::vector<double>{});
  }
  if (!v->is_array()) {
    error(path, "expected an array of numbers, got " + describe(*v));
    return {};
  }
  std::vector<double> out;
  for (const auto& x : *v) {
    if (!x.is_number()) {
      error(path, "expected an array of numbers");
      return {};
    }
    out.push_back(x.get<double>());
  }
  return out;
}

void Fields::raise() const {
  if (!errors_.empty()) throw ConfigError(errors_);
}

std::string to_string(Subcommand s) {
  switch (s) {
    case Subcommand::simulate: return "simulate";
    case Subcommand::decompose: return "decompose";
    case Subcommand::norms: return "norms";
    case Subcommand::bound: return "bound";
    case Subcommand::experiment: return "experiment";
  }
  return "?";
}

std::optional<Subcommand> parse_subcommand(const std::string& name) {
  for (auto s : {Subcommand::simulate, Subcommand::decompose, Subcommand::norms, Subcommand::bound,
                 Subcommand::experiment})
    if (to_string(s) == name) return s;
  return std::nullopt;
}

std::optional<std::uint64_t> resolve_seed(const std::optional<std::uint64_t>& flag, const json& doc) {
  if (flag) return flag;
  if (auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<long long>() >= 0))
      throw ConfigError("seed", "must be a nonnegative integer");
    return it->get<std::uint64_t>();
  }
  if (const char* env = std::getenv("POISSON_CHAOS_SEED"); env && *env) {
    std::uint64_t v = 0;
    const char* end = env + std::char_traits<char>::length(env);
    auto [p, ec] = std::from_chars(env, end, v);
    if (ec != std::errc() || p != end) throw ConfigError("POISSON_CHAOS_SEED", "not an unsigned integer");
    return v;
  }
  return std::nullopt;
}

Grid parse_grid(Fields& f, const std::string& p) {
  if (!f.has(p)) {
    f.error(p, "required");
    return {};
  }
  const std::string kind = f.choice(p + ".kind", {"torus", "box", "interval", "finite", "ou"});
  const std::size_t before = f.errors().size();
  Grid grid;
  if (kind == "finite") {
    const auto w = f.numbers(p + ".weights");
    if (f.errors().size() == before) grid = guarded(f, p + ".weights", [&] {
      Grid g = Grid::finite(w);
      g.validate();
      return g;
    });
  } else if (kind == "interval") {
    const double lo = f.number(p + ".lo", 0.0);
    const double hi = f.number(p + ".hi");
    const auto cells = static_cast<std::size_t>(f.integer(p + ".cells", std::nullopt, 1, 1 << 20));
    const double density = f.positive(p + ".density", 1.0);
    if (!(hi > lo)) f.error(p + ".hi", "must exceed lo");
    if (f.errors().size() == before) grid = guarded(f, p, [&] { return Grid::interval(lo, hi, cells, density); });
  } else if (kind == "ou") {
    const double rho = f.positive(p + ".rho");
    const double horizon = f.positive(p + ".horizon");
    const double step = f.positive(p + ".step");
    const double tol = f.positive(p + ".tol", 1e-6);
    if (f.errors().size() == before) grid = guarded(f, p, [&] { return ou_grid(rho, horizon, step, tol); });
  } else if (kind == "torus" || kind == "box") {
    const SpaceConfig sc = parse_space(f, p);
    const std::size_t dim = sc.location_dimension();
    const auto cells = cells_field(f, p + ".cells", dim == 0 ? 1 : dim);
    if (f.errors().size() == before) grid = guarded(f, p, [&] { return Grid::regular(sc, cells); });
  }
  if (f.has(p + ".atoms") || f.has(p + ".probabilities")) {
    const auto atoms = f.numbers(p + ".atoms");
    const auto probs = f.numbers(p + ".probabilities");
    if (atoms.size() != probs.size()) f.error(p + ".probabilities", "need one probability per atom");
    if (f.errors().size() == before) grid = guarded(f, p + ".atoms", [&] { return Grid::with_atoms(grid, atoms, probs); });
  }
  return grid;
}

KernelSpec parse_kernel(Fields& f) {
  if (!f.has("kernel")) {
    f.error("kernel", "required");
    return {};
  }
  const std::string type =
      f.choice("kernel.type", {"subgraph", "power_length", "ou1", "ou2", "product_mark", "constant", "tensor"});
  const std::size_t before = f.errors().size();
  const Grid grid = parse_grid(f, "grid");
  const int dim = grid.dim > 0 ? grid.dim - (grid.mark_atoms.empty() ? 0 : 1) : 1;

  KernelSpec spec;
  spec.name = type;
  if (type == "tensor") {
    const auto order = static_cast<int>(f.integer("kernel.order", std::nullopt, 1, 4));
    const auto values = f.numbers("kernel.values");
    if (f.errors().size() == before) {
      spec.kernel = guarded(f, "kernel.values", [&] {
        return symmetrize(DiscreteKernel{grid, Tensor(order, grid.size(), values)});
      });
    }
    return spec;
  }

  AnalyticKernel kernel;
  if (type == "subgraph") {
    SubgraphKernel k;
    k.graph = guarded(f, "kernel.graph", [&] { return Graph::named(f.string("kernel.graph", "K2")); });
    k.radius = f.positive("kernel.radius");
    k.metric = parse_metric(f, "kernel.metric");
    k.dim = dim;
    kernel = k;
    spec.name = "subgraph:" + f.string("kernel.graph", "K2");
  } else if (type == "power_length") {
    PowerLengthKernel k;
    k.alpha = f.number("kernel.alpha", 0.0);
    k.beta = f.number("kernel.beta", 2.0);
    k.radius.r0 = f.positive("kernel.radius");
    if (f.has("kernel.radius_decay")) {
      k.radius.kind = RadiusFunction::Kind::power_decay;
      k.radius.exponent = f.number("kernel.radius_decay");
    }
    k.metric = parse_metric(f, "kernel.metric");
    k.dim = dim;
    kernel = k;
  } else if (type == "ou1" || type == "ou2") {
    const double rho = f.positive("kernel.rho");
    const double horizon = f.positive("kernel.horizon");
    if (type == "ou1")
      kernel = OUOrder1Kernel{rho, horizon};
    else
      kernel = OUOrder2Kernel{rho, horizon};
  } else if (type == "product_mark") {
    ProductMarkKernel k;
    k.atoms = f.numbers("kernel.atoms");
    k.h = f.numbers("kernel.h");
    k.radius = f.positive("kernel.radius");
    k.metric = parse_metric(f, "kernel.metric");
    k.dim = dim;
    kernel = k;
  } else if (type == "constant") {
    ConstantKernel k;
    k.order = static_cast<int>(f.integer("kernel.order", std::nullopt, 1, 4));
    k.value = f.number("kernel.value", 1.0);
    k.dim = dim;
    kernel = k;
  }
  if (f.errors().size() != before) return spec;
  try {
    validate(kernel);
  } catch (const std::exception& e) {
    f.error("kernel", e.what());
    return spec;
  }
  spec.kernel = guarded(f, "kernel", [&] { return discretize(kernel, grid); });
  return spec;
}

Plan parse_plan(Subcommand sub, const json& doc, std::uint64_t seed, int threads) {
  if (!doc.is_object()) throw ConfigError("", "document must be a table");
  Fields f(doc);
  Plan plan;
  switch (sub) {
    case Subcommand::simulate: {
      SimulatePlan p;
      p.space = parse_space(f, "space");
      p.horizon = f.positive("plan.T");
      if (f.has("marks")) {
        p.mark_atoms = f.numbers("marks.atoms");
        p.mark_probabilities = f.numbers("marks.probabilities");
        if (p.mark_atoms.size() != p.mark_probabilities.size() || p.mark_atoms.empty())
          f.error("marks.probabilities", "need one probability per atom");
        for (double q : p.mark_probabilities)
          if (!(q >= 0.0)) f.error("marks.probabilities", "probabilities must be >= 0");
      }
      if (f.ok()) guarded(f, "space", [&] { p.space.validate(); return 0; });
      plan = p;
      break;
    }
    case Subcommand::decompose: {
      DecomposePlan p;
      p.spec = parse_kernel(f);
      p.T = f.positive("plan.T", 1.0);
      p.times = positive_grid(f, "plan.times");
      for (double t : p.times)
        if (t > p.T) {
          f.error("plan.times", "times must not exceed plan.T");
          break;
        }
      plan = p;
      break;
    }
    case Subcommand::norms: {
      NormsPlan p;
      p.spec = parse_kernel(f);
      p.options.restarts = static_cast<int>(f.integer("plan.restarts", 32, 1, 100000));
      p.options.tolerance = f.positive("plan.tolerance", 1e-10);
      p.options.max_sweeps = static_cast<int>(f.integer("plan.max_sweeps", 500, 1, 1000000));
      p.options.seed = seed;
      if (f.ok() && p.spec.kernel.order() > 4) f.error("kernel.order", "norm tables need order <= 4");
      plan = p;
      break;
    }
    case Subcommand::bound: {
      BoundPlan p;
      p.spec = parse_kernel(f);
      p.family = f.choice("plan.family", {"integral_tail", "simplified", "ustat_tail"}, "integral_tail");
      p.T = f.positive("plan.T");
      p.u_grid = positive_grid(f, "plan.u");
      p.c = f.positive("plan.c", 1.0);
      plan = p;
      break;
    }
    case Subcommand::experiment:
      plan = parse_experiment(f, seed, threads);
      break;
  }
  f.raise();
  return plan;
}

Plan parse_config(Subcommand sub, const std::filesystem::path& path, const std::vector<std::string>& overrides,
                  std::uint64_t seed, int threads) {
  json doc = load_document(path);
  for (const auto& o : overrides) apply_override(doc, o);
  return parse_plan(sub, doc, seed, threads);
}

}  // namespace poisson_chaos::cli
