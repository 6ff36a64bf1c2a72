#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "poisson_chaos/experiments.hpp"
#include "poisson_chaos/grid.hpp"
#include "poisson_chaos/kernels.hpp"
#include "poisson_chaos/point_process.hpp"

namespace poisson_chaos::cli {

struct FieldError {
  std::string path;  // e.g. "plan.T"
  std::string message;
};

// Every semantic problem found in a document, not just the first.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<FieldError> errors);
  ConfigError(const std::string& path, const std::string& message) : ConfigError(std::vector<FieldError>{{path, message}}) {}
  std::vector<FieldError> errors;
};

// TOML unless the extension is .json. Parse errors carry the file name and line.
nlohmann::json load_document(const std::filesystem::path& path);

// "plan.M=1000": the right side is read as a TOML value, falling back to a bare string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

// Typed accessors over a JSON document that record errors instead of throwing.
class Fields {
 public:
  explicit Fields(const nlohmann::json& root) : root_(root) {}

  const nlohmann::json* find(const std::string& path) const;
  bool has(const std::string& path) const { return find(path) != nullptr; }

  double number(const std::string& path, std::optional<double> fallback = std::nullopt);
  double positive(const std::string& path, std::optional<double> fallback = std::nullopt);
  long long integer(const std::string& path, std::optional<long long> fallback = std::nullopt, long long lo = 0,
                    long long hi = (1LL << 53));
  std::string string(const std::string& path, std::optional<std::string> fallback = std::nullopt);
  std::string choice(const std::string& path, const std::vector<std::string>& options,
                     std::optional<std::string> fallback = std::nullopt);
  std::vector<double> numbers(const std::string& path, std::optional<std::vector<double>> fallback = std::nullopt);

  void error(const std::string& path, const std::string& message) { errors_.push_back({path, message}); }
  bool ok() const { return errors_.empty(); }
  const std::vector<FieldError>& errors() const { return errors_; }
  // Throws ConfigError if anything was recorded.
  void raise() const;

 private:
  const nlohmann::json& root_;
  std::vector<FieldError> errors_;
};

enum class Subcommand { simulate, decompose, norms, bound, experiment };
std::string to_string(Subcommand s);
std::optional<Subcommand> parse_subcommand(const std::string& name);

struct RunOptions {
  Subcommand subcommand = Subcommand::simulate;
  std::filesystem::path config;
  std::filesystem::path out = ".";
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::vector<std::string> overrides;
};

// Flag, then the document's top-level `seed`, then POISSON_CHAOS_SEED.
std::optional<std::uint64_t> resolve_seed(const std::optional<std::uint64_t>& flag, const nlohmann::json& doc);

struct SimulatePlan {
  SpaceConfig space;
  double horizon = 1.0;
  std::vector<double> mark_atoms;  // empty: unmarked
  std::vector<double> mark_probabilities;
};

// Kernel on its grid, with the step-kernel form when the experiment needs one.
struct KernelSpec {
  DiscreteKernel kernel;
  std::string name;
};

struct DecomposePlan {
  KernelSpec spec;
  double T = 1.0;
  std::vector<double> times;  // evaluation times for the chaos trace
};

struct NormsPlan {
  KernelSpec spec;
  NormOptions options;
};

struct BoundPlan {
  KernelSpec spec;
  std::string family = "integral_tail";  // integral_tail | simplified | ustat_tail
  double T = 1.0;
  std::vector<double> u_grid;
  double c = 1.0;
};

using ExperimentPlan = std::variant<TailPlan, MaximalPlan, DecouplingPlan, LilPlan, VariancePlan, IsometryPlan>;

using Plan = std::variant<SimulatePlan, DecomposePlan, NormsPlan, BoundPlan, ExperimentPlan>;

Grid parse_grid(Fields& f, const std::string& prefix);
KernelSpec parse_kernel(Fields& f);

// Fully validated plan, or ConfigError listing all field errors.
Plan parse_plan(Subcommand sub, const nlohmann::json& doc, std::uint64_t seed, int threads);

// load_document + overrides + parse_plan.
Plan parse_config(Subcommand sub, const std::filesystem::path& path, const std::vector<std::string>& overrides,
                  std::uint64_t seed, int threads);

}  // namespace poisson_chaos::cli
