#pragma once

#include "tpsolve/problem.hpp"
#include "tpsolve/report.hpp"
#include "tpsolve/solvers.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tpsolve {

/// Invalid or inconsistent experiment configuration.
class ConfigError : public SolverError {
 public:
  using SolverError::SolverError;
};

enum class Method {
  kSequential,
  kPpIc,
  kPpPcJacobi,
  kPpPcMh,
  kTpMh,
  kSplitting,
};

[[nodiscard]] Method parse_method(const std::string& name);
[[nodiscard]] std::string method_name(Method method);

/// Built-in problem selection; `interior_nodes`, `period` and `amplitude`
/// apply to the diffusion models only.
struct ModelConfig {
  std::string name = "rl1d";
  int interior_nodes = 21;
  double period = 1.0;
  double amplitude = 0.8;
};

[[nodiscard]] PeriodicProblem make_model(const ModelConfig& model);

/// tp_mh restarted on a grid of expansion points z = k * step with
/// min < z < max (open interval, k integer).
struct ZSweepConfig {
  double min = 0.0;
  double max = 0.0;
  double step = 0.0;
};

struct ExperimentConfig {
  Method method = Method::kSequential;
  ModelConfig model;
  int windows = 10;
  int steps_per_window = 1;
  SolverOptions options;
  SplittingChoice splitting = SplittingChoice::kProductJacobian;
  int workers = 0;  // 0 = not set in the config file
  std::optional<ZSweepConfig> z_sweep;
};

/// Parses and validates a JSON experiment configuration.  Unknown keys are
/// rejected with their full path; values are type- and range-checked.
[[nodiscard]] ExperimentConfig parse_config_text(const std::string& text);
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& file);

/// Worker-count precedence: command-line flag, then config file, then the
/// TPSOLVE_WORKERS environment variable, then 1.
[[nodiscard]] int resolve_workers(std::optional<int> flag_value,
                                  int config_value);

/// Runs the configured method on an already-built problem/grid pair.
[[nodiscard]] SolverReport run_method(Method method,
                                      const PeriodicProblem& problem,
                                      const TimeGrid& grid,
                                      const SolverOptions& options,
                                      SplittingChoice splitting,
                                      const WorkerPool& pool);

struct ZSweepEntry {
  double z = 0.0;
  int newton_iterations = 0;
  double rho1 = 0.0;
  double h0 = 0.0;
  double rho = 0.0;
  bool converged = false;
};

[[nodiscard]] std::vector<ZSweepEntry> run_z_sweep(
    const ExperimentConfig& config, const PeriodicProblem& problem,
    const TimeGrid& grid, const WorkerPool& pool);

/// Executes the experiment and writes report.json, errors.csv and
/// solution.csv (plus zsweep.csv when a sweep is configured) into `out_dir`.
/// All files are byte-stable for a fixed config and worker count; wall-clock
/// timing goes to `log` only.  Returns the process exit code: 0 when every
/// run converged, 2 when an iteration cap was the only obstacle.
[[nodiscard]] int run_experiment(const ExperimentConfig& config,
                                 const std::filesystem::path& out_dir,
                                 std::ostream& log);

}  // namespace tpsolve
