#include "poisson_chaos/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "poisson_chaos/bounds.hpp"
#include "poisson_chaos/chaos.hpp"
#include "poisson_chaos/error.hpp"
#include "poisson_chaos/experiments.hpp"
#include "poisson_chaos/io.hpp"
#include "poisson_chaos/norms.hpp"

#ifndef POISSON_CHAOS_VERSION
#define POISSON_CHAOS_VERSION "0.0.0"
#endif

namespace poisson_chaos::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Collects written artifacts so the manifest can list them.
class OutputDir {
 public:
  explicit OutputDir(fs::path root) : root_(std::move(root)) {}

  template <class F>
  void write(const std::string& name, F&& body) {
    std::ofstream os(root_ / name, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + (root_ / name).string());
    body(os);
    if (!os) throw std::runtime_error("write failed: " + (root_ / name).string());
    files_.push_back(name);
  }
  void write_json(const std::string& name, const json& j) {
    write(name, [&](std::ostream& os) { os << j.dump(2) << "\n"; });
  }
  const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path root_;
  std::vector<std::string> files_;
};

json scalars_json(const std::map<std::string, double>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[k] = std::isfinite(v) ? json(v) : json(nullptr);
  return j;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_values_csv(std::ostream& os, const std::vector<double>& values) {
  write_csv_row(os, {"replication", "value"});
  for (std::size_t i = 0; i < values.size(); ++i) write_csv_row(os, {std::to_string(i), format_double(values[i])});
}

void write_tail_plot(std::ostream& os, const std::string& csv, bool with_secondary) {
  os << "# gnuplot\n"
        "set datafile separator ','\n"
        "set logscale y\n"
        "set xlabel 'u'\n"
        "set ylabel 'P(|X| >= u)'\n"
        "plot '"
     << csv << "' using 1:3 skip 1 with points title 'empirical', \\\n  '" << csv
     << "' using 1:6 skip 1 with lines title 'bound'";
  if (with_secondary) os << ", \\\n  'secondary_curve.csv' using 1:3 skip 1 with points title 'comparison'";
  os << "\n";
}

struct Outcome {
  bool passed = true;
  json summary;
};

Outcome run_simulate(const SimulatePlan& p, std::uint64_t seed, OutputDir& out) {
  const auto sample = sample_process(p.space, p.horizon, seed);
  if (p.mark_atoms.empty()) {
    out.write("sample.csv", [&](std::ostream& os) { write_sample_csv(os, sample); });
  } else {
    const auto marked = mark_sample(sample, discrete_mark(p.mark_atoms, p.mark_probabilities), derive_seed(seed, 1));
    out.write("sample.csv", [&](std::ostream& os) { write_sample_csv(os, marked); });
  }
  out.write("sample.json", [&](std::ostream& os) { os << sample_envelope_json(sample) << "\n"; });
  return {true, {{"points", sample.size()}, {"expected_points", p.space.total_mass() * p.horizon}}};
}

Outcome run_decompose(const DecomposePlan& p, std::uint64_t seed, OutputDir& out) {
  const auto conv = to_step_kernel(p.spec.kernel);
  const auto dec = chaos_expand(p.spec.kernel);
  out.write("kernel.csv", [&](std::ostream& os) { write_kernel_csv(os, p.spec.kernel); });
  for (int n = 1; n <= dec.order; ++n)
    out.write("g_" + std::to_string(n) + ".csv", [&](std::ostream& os) { write_kernel_csv(os, dec.g(n)); });

  Outcome o;
  o.summary = {{"order", dec.order},
               {"mean_coefficient", dec.mean_coefficient},
               {"binomial_weights", dec.binomial_weights},
               {"dropped_diagonal_mass", conv.dropped_mass},
               {"dropped_diagonal_l2_sq", conv.dropped_l2_sq}};
  if (!p.times.empty()) {
    const auto step_dec = chaos_expand(conv.kernel);
    const auto sample = sample_process(finite_space(conv.kernel.grid), p.T, seed);
    std::vector<ChaosEvaluation> trace;
    double worst = 0.0;
    for (double t : p.times) {
      trace.push_back(evaluate_chaos(conv.kernel, step_dec, sample, t));
      worst = std::max(worst, std::abs(trace.back().residual) / (1.0 + std::abs(trace.back().ustat)));
    }
    out.write("chaos_trace.csv", [&](std::ostream& os) { write_chaos_trace_csv(os, trace); });
    o.summary["max_relative_residual"] = worst;
    for (const auto& ev : trace) {
      try {
        require_chaos_identity(ev);
      } catch (const IdentityViolation&) {
        o.passed = false;
      }
    }
  }
  return o;
}

Outcome run_norms(const NormsPlan& p, OutputDir& out) {
  const auto table = build_norm_table(p.spec.kernel, p.options);
  out.write("norms.json", [&](std::ostream& os) { os << table.to_json() << "\n"; });
  out.write("norms.csv", [&](std::ostream& os) {
    write_csv_row(os, {"key", "k", "partition", "multiplicity", "value"});
    for (const auto& e : table.entries)
      write_csv_row(os, {e.key, std::to_string(e.k), e.partition.to_string(), std::to_string(e.multiplicity),
                         format_double(e.value)});
  });
  return {true, {{"entries", table.entries.size()}, {"l2", table.l2}, {"B", table.B}}};
}

Outcome run_bound(const BoundPlan& p, OutputDir& out) {
  const auto& g = p.spec.kernel;
  const auto table = build_norm_table(g);
  std::vector<NormTable> projected;
  if (p.family == "ustat_tail")
    for (int n = 1; n <= g.order(); ++n) projected.push_back(build_norm_table(project_kernel(g, n)));
  std::vector<BoundCurvePoint> curve;
  for (double u : p.u_grid) {
    TailBound b;
    if (p.family == "simplified")
      b = simplified_tail_bound(table.B, p.T, u, p.c);
    else if (p.family == "ustat_tail")
      b = ustat_tail_bound(projected, p.T, u, p.c);
    else
      b = integral_tail_bound(table, p.T, u, p.c);
    curve.push_back({u, b.value, b.regime});
  }
  out.write("bound_curve.csv", [&](std::ostream& os) { write_bound_curve_csv(os, curve); });
  out.write("bound_curve.plot.txt", [&](std::ostream& os) {
    os << "# gnuplot\nset datafile separator ','\nset logscale y\n"
          "plot 'bound_curve.csv' using 1:2 skip 1 with lines title '"
       << p.family << "'\n";
  });
  return {true, {{"family", p.family}, {"points", curve.size()}}};
}

Outcome tail_outputs(const ExperimentResult& r, OutputDir& out) {
  out.write("tail_curve.csv", [&](std::ostream& os) { write_tail_curve_csv(os, r.curve); });
  if (!r.secondary_curve.empty())
    out.write("secondary_curve.csv", [&](std::ostream& os) { write_tail_curve_csv(os, r.secondary_curve); });
  out.write("values.csv", [&](std::ostream& os) { write_values_csv(os, r.values); });
  out.write("tail_curve.plot.txt",
            [&](std::ostream& os) { write_tail_plot(os, "tail_curve.csv", !r.secondary_curve.empty()); });
  return {r.passed,
          {{"experiment", r.name},
           {"replications", r.replications},
           {"calibrated_c", finite_or_null(r.calibrated_c)},
           {"scalars", scalars_json(r.scalars)},
           {"passed", r.passed}}};
}

Outcome run_experiment(const ExperimentPlan& plan, OutputDir& out) {
  return std::visit(
      [&](const auto& p) -> Outcome {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, TailPlan>) {
          return tail_outputs(empirical_tail(p), out);
        } else if constexpr (std::is_same_v<P, MaximalPlan>) {
          return tail_outputs(maximal_inequality_check(p), out);
        } else if constexpr (std::is_same_v<P, DecouplingPlan>) {
          return tail_outputs(decoupling_check(p), out);
        } else if constexpr (std::is_same_v<P, LilPlan>) {
          const auto r = lil_trajectory(p);
          out.write("lil.csv", [&](std::ostream& os) { write_lil_csv(os, r); });
          return {true,
                  {{"experiment", "lil"},
                   {"order", r.order},
                   {"degeneracy_order", r.degeneracy_order},
                   {"cluster_set", {r.cluster_set.lower, r.cluster_set.upper}},
                   {"running_max_integral", r.running_max_integral},
                   {"running_max_ustat", r.running_max_ustat}}};
        } else {
          const auto r = [&] {
            if constexpr (std::is_same_v<P, VariancePlan>)
              return variance_check(p);
            else
              return isometry_check(p);
          }();
          out.write("values.csv", [&](std::ostream& os) { write_values_csv(os, r.values); });
          return {r.passed, {{"experiment", r.name}, {"scalars", scalars_json(r.scalars)}, {"passed", r.passed}}};
        }
      },
      plan);
}

void report_config_error(const ConfigError& e, std::ostream& err) {
  err << "invalid configuration:\n";
  for (const auto& fe : e.errors) err << "  " << (fe.path.empty() ? "<root>" : fe.path) << ": " << fe.message << "\n";
}

}  // namespace

int run(const RunOptions& options, std::ostream& log, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  json doc;
  Plan plan;
  std::uint64_t seed = 0;
  try {
    doc = load_document(options.config);
    for (const auto& o : options.overrides) apply_override(doc, o);
    const auto s = resolve_seed(options.seed, doc);
    if (!s) throw ConfigError("seed", "no seed: pass --seed, set `seed` in the config or POISSON_CHAOS_SEED");
    seed = *s;
    if (options.threads < 0) throw ConfigError("--threads", "must be >= 0");
    plan = parse_plan(options.subcommand, doc, seed, options.threads);
  } catch (const ConfigError& e) {
    report_config_error(e, err);
    return kValidationFailure;
  }

  std::error_code ec;
  fs::create_directories(options.out, ec);
  if (ec || !fs::is_directory(options.out)) {
    err << "output directory " << options.out << " is not writable\n";
    return kValidationFailure;
  }

  OutputDir out(options.out);
  Outcome outcome;
  try {
    outcome = std::visit(
        [&](const auto& p) -> Outcome {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, SimulatePlan>) return run_simulate(p, seed, out);
          else if constexpr (std::is_same_v<P, DecomposePlan>) return run_decompose(p, seed, out);
          else if constexpr (std::is_same_v<P, NormsPlan>) return run_norms(p, out);
          else if constexpr (std::is_same_v<P, BoundPlan>) return run_bound(p, out);
          else return run_experiment(p, out);
        },
        plan);
  } catch (const IdentityViolation& e) {
    err << "check failed: " << e.what() << "\n";
    outcome.passed = false;
    outcome.summary = {{"error", e.what()}};
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const std::logic_error& e) {
    err << "invalid input: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  }

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json manifest = {{"artifact", "poisson-chaos"},
                   {"version", POISSON_CHAOS_VERSION},
                   {"subcommand", to_string(options.subcommand)},
                   {"seed", seed},
                   {"threads", resolve_thread_count(options.threads)},
                   {"config", doc},
                   {"overrides", options.overrides},
                   {"outputs", out.files()},
                   {"summary", outcome.summary},
                   {"status", outcome.passed ? "ok" : "check_failed"},
                   {"runtime_seconds", seconds}};
  try {
    out.write_json("manifest.json", manifest);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  }
  log << to_string(options.subcommand) << ": " << (outcome.passed ? "ok" : "check failed") << " -> "
      << options.out.string() << "\n";
  return outcome.passed ? kOk : kCheckFailure;
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Poisson U-statistics: simulation, chaos decomposition, norms, tail bounds and experiments",
               "poisson-chaos"};
  app.set_version_flag("--version", std::string(POISSON_CHAOS_VERSION));
  app.require_subcommand(1);

  RunOptions opt;
  std::uint64_t seed = 0;
  const std::vector<std::pair<Subcommand, const char*>> subs{
      {Subcommand::simulate, "Sample the space-time process"},
      {Subcommand::decompose, "Chaos decomposition of a kernel, with an optional identity trace"},
      {Subcommand::norms, "Partition and conditional norm table"},
      {Subcommand::bound, "Evaluate a tail bound over a u-grid"},
      {Subcommand::experiment, "Monte Carlo campaign (tail, maximal, decoupling, lil, variance, isometry)"},
  };
  std::vector<CLI::App*> handles;
  std::vector<CLI::Option*> seed_opts;
  for (const auto& [sub, help] : subs) {
    auto* s = app.add_subcommand(to_string(sub), help);
    s->add_option("--config", opt.config, "TOML or JSON run configuration")->required()->check(CLI::ExistingFile);
    s->add_option("--out", opt.out, "Output directory")->capture_default_str();
    seed_opts.push_back(s->add_option("--seed", seed, "Master seed (else config `seed`, else POISSON_CHAOS_SEED)"));
    s->add_option("--threads", opt.threads, "Worker threads (0: POISSON_CHAOS_THREADS or hardware)")
        ->capture_default_str();
    s->add_option("--set", opt.overrides, "Override key=value (repeatable)")->allow_extra_args(false);
    handles.push_back(s);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kValidationFailure;
  }
  for (std::size_t i = 0; i < handles.size(); ++i) {
    if (!handles[i]->parsed()) continue;
    opt.subcommand = subs[i].first;
    if (seed_opts[i]->count()) opt.seed = seed;
  }
  return run(opt, std::cout, std::cerr);
}

}  // namespace poisson_chaos::cli
