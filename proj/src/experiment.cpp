#include "tpsolve/experiment.hpp"

#include "tpsolve/models.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace tpsolve {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string joined(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void require_keys(const json& object, const std::string& path,
                  std::initializer_list<const char*> allowed) {
  for (auto it = object.begin(); it != object.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("config: unknown key \"" + joined(path, it.key()) +
                        "\"");
    }
  }
}

const json* find(const json& object, const char* key) {
  const auto it = object.find(key);
  return it == object.end() ? nullptr : &*it;
}

const json& require(const json& object, const std::string& path,
                    const char* key) {
  const json* value = find(object, key);
  if (value == nullptr) {
    throw ConfigError("config: missing required key \"" + joined(path, key) +
                      "\"");
  }
  return *value;
}

std::string get_string(const json& value, const std::string& path) {
  if (!value.is_string()) {
    throw ConfigError("config: \"" + path + "\" must be a string");
  }
  return value.get<std::string>();
}

double get_number(const json& value, const std::string& path) {
  if (!value.is_number()) {
    throw ConfigError("config: \"" + path + "\" must be a number");
  }
  return value.get<double>();
}

int get_integer(const json& value, const std::string& path) {
  if (!value.is_number_integer()) {
    throw ConfigError("config: \"" + path + "\" must be an integer");
  }
  return value.get<int>();
}

bool get_bool(const json& value, const std::string& path) {
  if (!value.is_boolean()) {
    throw ConfigError("config: \"" + path + "\" must be a boolean");
  }
  return value.get<bool>();
}

int get_positive_integer(const json& value, const std::string& path) {
  const int result = get_integer(value, path);
  if (result < 1) {
    throw ConfigError("config: \"" + path + "\" must be >= 1");
  }
  return result;
}

double get_positive_number(const json& value, const std::string& path) {
  const double result = get_number(value, path);
  if (!(result > 0.0)) {
    throw ConfigError("config: \"" + path + "\" must be positive");
  }
  return result;
}

void parse_model(const json& value, ModelConfig& model) {
  if (!value.is_object()) {
    throw ConfigError("config: \"model\" must be an object");
  }
  model.name = get_string(require(value, "model", "name"), "model.name");
  if (model.name == "rl1d") {
    require_keys(value, "model", {"name"});
  } else if (model.name == "diffusion1d" || model.name == "diffusion1d_linear") {
    require_keys(value, "model",
                 {"name", "interior_nodes", "period", "amplitude"});
    if (const json* nodes = find(value, "interior_nodes")) {
      model.interior_nodes =
          get_positive_integer(*nodes, "model.interior_nodes");
    }
    if (const json* period = find(value, "period")) {
      model.period = get_positive_number(*period, "model.period");
    }
    if (const json* amplitude = find(value, "amplitude")) {
      model.amplitude = get_number(*amplitude, "model.amplitude");
    }
  } else {
    throw ConfigError("config: unknown model \"" + model.name +
                      "\" (expected rl1d, diffusion1d or diffusion1d_linear)");
  }
}

void parse_solver(const json& value, SolverOptions& options) {
  if (!value.is_object()) {
    throw ConfigError("config: \"solver\" must be an object");
  }
  require_keys(value, "solver",
               {"max_outer", "max_inner", "a_tol", "r_tol", "z",
                "record_iterates", "step_solver", "coarse_scheme", "step_tol",
                "max_step_iterations"});
  if (const json* v = find(value, "max_outer")) {
    options.max_outer = get_positive_integer(*v, "solver.max_outer");
  }
  if (const json* v = find(value, "max_inner")) {
    options.max_inner = get_positive_integer(*v, "solver.max_inner");
  }
  if (const json* v = find(value, "a_tol")) {
    options.a_tol = get_positive_number(*v, "solver.a_tol");
  }
  if (const json* v = find(value, "r_tol")) {
    options.r_tol = get_positive_number(*v, "solver.r_tol");
  }
  if (const json* v = find(value, "z")) {
    options.z = get_number(*v, "solver.z");
    if (!std::isfinite(options.z)) {
      throw ConfigError("config: \"solver.z\" must be finite");
    }
  }
  if (const json* v = find(value, "record_iterates")) {
    options.record_iterates = get_bool(*v, "solver.record_iterates");
  }
  if (const json* v = find(value, "step_solver")) {
    const std::string solver = get_string(*v, "solver.step_solver");
    if (solver == "newton") {
      options.propagator.step_solver = StepSolver::kNewton;
    } else if (solver == "substitution") {
      options.propagator.step_solver = StepSolver::kSuccessiveSubstitution;
    } else {
      throw ConfigError(
          "config: \"solver.step_solver\" must be \"newton\" or "
          "\"substitution\"");
    }
  }
  if (const json* v = find(value, "coarse_scheme")) {
    const std::string scheme = get_string(*v, "solver.coarse_scheme");
    if (scheme == "implicit_euler") {
      options.propagator.coarse_scheme = CoarseScheme::kImplicitEuler;
    } else if (scheme == "trapezoidal") {
      options.propagator.coarse_scheme = CoarseScheme::kTrapezoidal;
    } else {
      throw ConfigError(
          "config: \"solver.coarse_scheme\" must be \"implicit_euler\" or "
          "\"trapezoidal\"");
    }
  }
  if (const json* v = find(value, "step_tol")) {
    options.propagator.step_tol = get_positive_number(*v, "solver.step_tol");
  }
  if (const json* v = find(value, "max_step_iterations")) {
    options.propagator.max_step_iterations =
        get_positive_integer(*v, "solver.max_step_iterations");
  }
}

std::string format_value(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.16e", value);
  return buffer;
}

std::ofstream open_output(const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) {
    throw SolverError("cannot write " + file.string());
  }
  return out;
}

void write_errors_csv(const std::filesystem::path& file,
                      const SolverReport& report) {
  std::ofstream out = open_output(file);
  out << "iteration,error\n";
  for (size_t i = 0; i < report.error_history.size(); ++i) {
    out << i << ',' << format_value(report.error_history[i]) << '\n';
  }
}

void write_solution_csv(const std::filesystem::path& file,
                        const SolverReport& report) {
  std::ofstream out = open_output(file);
  out << "time";
  for (long component = 0; component < report.solution.rows(); ++component) {
    out << ",u" << component;
  }
  out << '\n';
  for (long point = 0; point < report.solution.cols(); ++point) {
    out << format_value(report.solution_times[static_cast<size_t>(point)]);
    for (long component = 0; component < report.solution.rows(); ++component) {
      out << ',' << format_value(report.solution(component, point));
    }
    out << '\n';
  }
}

void write_zsweep_csv(const std::filesystem::path& file,
                      const std::vector<ZSweepEntry>& entries) {
  std::ofstream out = open_output(file);
  out << "z,newton_iterations,rho1,h0,rho,converged\n";
  for (const ZSweepEntry& entry : entries) {
    out << format_value(entry.z) << ',' << entry.newton_iterations << ','
        << format_value(entry.rho1) << ',' << format_value(entry.h0) << ','
        << format_value(entry.rho) << ',' << (entry.converged ? 1 : 0) << '\n';
  }
}

void write_report_json(const std::filesystem::path& file,
                       const ExperimentConfig& config, double period,
                       const SolverReport& report, int workers, int exit_code,
                       const std::vector<ZSweepEntry>* sweep) {
  ordered_json j;
  j["method"] = method_name(config.method);
  j["model"] = config.model.name;
  j["grid"] = {{"windows", config.windows},
               {"steps_per_window", config.steps_per_window},
               {"period", period}};
  j["workers"] = workers;
  j["converged"] = report.converged;
  j["exit_code"] = exit_code;
  j["outer_iterations"] = report.outer_iterations;
  j["inner_iterations"] = report.inner_iterations;
  j["error_history"] = report.error_history;
  j["first_update_norm"] = report.first_update_norm;
  j["effective_solves"] = report.counters.effective();
  j["total_solves"] = report.counters.total();
  ordered_json per_worker = ordered_json::array();
  for (int w = 0; w < report.counters.workers(); ++w) {
    per_worker.push_back(
        {{"factor_solves", report.counters.tally(w).factor_solves},
         {"cached_resolves", report.counters.tally(w).cached_resolves}});
  }
  j["per_worker"] = per_worker;
  j["diagnostics"] = report.diagnostics;
  if (sweep != nullptr) {
    bool all_converged = true;
    double max_h0 = 0.0;
    for (const ZSweepEntry& entry : *sweep) {
      all_converged = all_converged && entry.converged;
      max_h0 = std::max(max_h0, entry.h0);
    }
    j["z_sweep"] = {{"entries", sweep->size()},
                    {"all_converged", all_converged},
                    {"max_h0", max_h0}};
  }
  std::ofstream out = open_output(file);
  out << j.dump(2) << '\n';
}

}  // namespace

Method parse_method(const std::string& name) {
  if (name == "sequential") return Method::kSequential;
  if (name == "pp_ic") return Method::kPpIc;
  if (name == "pp_pc_jacobi") return Method::kPpPcJacobi;
  if (name == "pp_pc_mh") return Method::kPpPcMh;
  if (name == "tp_mh") return Method::kTpMh;
  if (name == "splitting") return Method::kSplitting;
  throw ConfigError(
      "config: unknown method \"" + name +
      "\" (expected sequential, pp_ic, pp_pc_jacobi, pp_pc_mh, tp_mh or "
      "splitting)");
}

std::string method_name(Method method) {
  switch (method) {
    case Method::kSequential:
      return "sequential";
    case Method::kPpIc:
      return "pp_ic";
    case Method::kPpPcJacobi:
      return "pp_pc_jacobi";
    case Method::kPpPcMh:
      return "pp_pc_mh";
    case Method::kTpMh:
      return "tp_mh";
    case Method::kSplitting:
      return "splitting";
  }
  throw std::logic_error("method_name: invalid method");
}

PeriodicProblem make_model(const ModelConfig& model) {
  if (model.name == "rl1d") {
    return rl_circuit_1d();
  }
  if (model.name == "diffusion1d") {
    return nonlinear_diffusion_1d(model.interior_nodes, model.period,
                                  model.amplitude);
  }
  if (model.name == "diffusion1d_linear") {
    return linear_diffusion_1d(model.interior_nodes, model.period,
                               model.amplitude);
  }
  throw ConfigError("config: unknown model \"" + model.name + "\"");
}

ExperimentConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& error) {
    throw ConfigError(std::string("config: ") + error.what());
  }
  if (!root.is_object()) {
    throw ConfigError("config: top level must be an object");
  }
  require_keys(root, "",
               {"method", "model", "grid", "solver", "workers", "splitting",
                "z_sweep"});

  ExperimentConfig config;
  config.method =
      parse_method(get_string(require(root, "", "method"), "method"));
  parse_model(require(root, "", "model"), config.model);

  if (const json* grid = find(root, "grid")) {
    if (!grid->is_object()) {
      throw ConfigError("config: \"grid\" must be an object");
    }
    require_keys(*grid, "grid", {"windows", "steps_per_window"});
    if (const json* windows = find(*grid, "windows")) {
      config.windows = get_positive_integer(*windows, "grid.windows");
    }
    if (const json* steps = find(*grid, "steps_per_window")) {
      config.steps_per_window =
          get_positive_integer(*steps, "grid.steps_per_window");
    }
  }

  if (const json* solver = find(root, "solver")) {
    parse_solver(*solver, config.options);
  }

  if (const json* workers = find(root, "workers")) {
    config.workers = get_positive_integer(*workers, "workers");
  }

  if (const json* splitting = find(root, "splitting")) {
    if (config.method != Method::kSplitting) {
      throw ConfigError(
          "config: \"splitting\" is only valid with method \"splitting\"");
    }
    const std::string choice = get_string(*splitting, "splitting");
    if (choice == "product_jacobian") {
      config.splitting = SplittingChoice::kProductJacobian;
    } else if (choice == "stiffness") {
      config.splitting = SplittingChoice::kStiffness;
    } else {
      throw ConfigError(
          "config: \"splitting\" must be \"product_jacobian\" or "
          "\"stiffness\"");
    }
  }

  if (const json* sweep = find(root, "z_sweep")) {
    if (config.method != Method::kTpMh) {
      throw ConfigError("config: \"z_sweep\" requires method \"tp_mh\"");
    }
    if (!sweep->is_object()) {
      throw ConfigError("config: \"z_sweep\" must be an object");
    }
    require_keys(*sweep, "z_sweep", {"min", "max", "step"});
    ZSweepConfig z_sweep;
    z_sweep.min = get_number(require(*sweep, "z_sweep", "min"), "z_sweep.min");
    z_sweep.max = get_number(require(*sweep, "z_sweep", "max"), "z_sweep.max");
    z_sweep.step =
        get_positive_number(require(*sweep, "z_sweep", "step"), "z_sweep.step");
    if (!(z_sweep.min < z_sweep.max)) {
      throw ConfigError("config: \"z_sweep.min\" must be below \"z_sweep.max\"");
    }
    config.z_sweep = z_sweep;
  }

  return config;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw ConfigError("config: cannot read " + file.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

int resolve_workers(std::optional<int> flag_value, int config_value) {
  int value = 1;
  if (flag_value.has_value()) {
    value = *flag_value;
  } else if (config_value > 0) {
    value = config_value;
  } else if (const char* env = std::getenv("TPSOLVE_WORKERS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || parsed < 1 || parsed > 1 << 20) {
      throw ConfigError("TPSOLVE_WORKERS must be a positive integer, got \"" +
                        std::string(env) + "\"");
    }
    value = static_cast<int>(parsed);
  }
  if (value < 1) {
    throw ConfigError("worker count must be >= 1");
  }
  return value;
}

SolverReport run_method(Method method, const PeriodicProblem& problem,
                        const TimeGrid& grid, const SolverOptions& options,
                        SplittingChoice splitting, const WorkerPool& pool) {
  switch (method) {
    case Method::kSequential:
      return sequential_steady_state(problem, grid, options, pool);
    case Method::kPpIc:
      return pp_ic(problem, grid, options, pool);
    case Method::kPpPcJacobi:
      return pp_pc_jacobi(problem, grid, options, pool);
    case Method::kPpPcMh:
      return pp_pc_mh(problem, grid, options, pool);
    case Method::kTpMh:
      return tp_mh(problem, grid, options, pool);
    case Method::kSplitting:
      return splitting_iteration(problem, grid, splitting, options, pool);
  }
  throw std::logic_error("run_method: invalid method");
}

std::vector<ZSweepEntry> run_z_sweep(const ExperimentConfig& config,
                                     const PeriodicProblem& problem,
                                     const TimeGrid& grid,
                                     const WorkerPool& pool) {
  if (!config.z_sweep.has_value()) {
    throw ConfigError("run_z_sweep: no z_sweep section configured");
  }
  const ZSweepConfig& sweep = *config.z_sweep;
  const PiecewiseCubic curve = make_saturating_curve();
  const ConvergenceConstants constants =
      estimate_constants(curve, curve.pieces().back().start);

  std::vector<ZSweepEntry> entries;
  long k = static_cast<long>(std::floor(sweep.min / sweep.step));
  while (static_cast<double>(k) * sweep.step <= sweep.min) {
    ++k;
  }
  for (; static_cast<double>(k) * sweep.step < sweep.max; ++k) {
    SolverOptions options = config.options;
    options.z = static_cast<double>(k) * sweep.step;
    options.record_iterates = false;
    const SolverReport run = tp_mh(problem, grid, options, pool);
    const NewtonContraction contraction =
        newton_contraction(constants, run.first_update_norm);
    entries.push_back(ZSweepEntry{options.z, run.outer_iterations,
                                  run.first_update_norm, contraction.h0,
                                  contraction.rho, run.converged});
  }
  return entries;
}

int run_experiment(const ExperimentConfig& config,
                   const std::filesystem::path& out_dir, std::ostream& log) {
  const PeriodicProblem problem = make_model(config.model);
  const TimeGrid grid(config.windows, config.steps_per_window, problem.period);
  const int workers = resolve_workers(std::nullopt, config.workers);
  const WorkerPool pool(workers);

  const auto started = std::chrono::steady_clock::now();
  const SolverReport report =
      run_method(config.method, problem, grid, config.options,
                 config.splitting, pool);

  bool all_converged = report.converged;
  std::vector<ZSweepEntry> sweep;
  if (config.z_sweep.has_value()) {
    sweep = run_z_sweep(config, problem, grid, pool);
    for (const ZSweepEntry& entry : sweep) {
      all_converged = all_converged && entry.converged;
    }
  }
  const std::chrono::duration<double> wall =
      std::chrono::steady_clock::now() - started;

  const int exit_code = all_converged ? 0 : 2;
  std::filesystem::create_directories(out_dir);
  write_report_json(out_dir / "report.json", config, problem.period, report,
                    workers, exit_code,
                    config.z_sweep.has_value() ? &sweep : nullptr);
  write_errors_csv(out_dir / "errors.csv", report);
  write_solution_csv(out_dir / "solution.csv", report);
  if (config.z_sweep.has_value()) {
    write_zsweep_csv(out_dir / "zsweep.csv", sweep);
  }

  log << "method=" << method_name(config.method) << " model="
      << config.model.name << " workers=" << workers << " converged="
      << (all_converged ? "true" : "false") << " outer="
      << report.outer_iterations << " effective_solves="
      << report.counters.effective() << " total_solves="
      << report.counters.total() << " wall_seconds=" << wall.count() << "\n";
  return exit_code;
}

}  // namespace tpsolve
