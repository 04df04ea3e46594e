#include "tpsolve/experiment.hpp"
#include "tpsolve/metrics.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <iostream>
#include <optional>
#include <string>

namespace py = pybind11;

namespace {

py::dict report_to_dict(const tpsolve::SolverReport& report) {
  py::dict result;
  result["converged"] = report.converged;
  result["outer_iterations"] = report.outer_iterations;
  result["inner_iterations"] = report.inner_iterations;
  result["error_history"] = report.error_history;
  result["solution"] = report.solution;
  result["solution_times"] = report.solution_times;
  result["first_update_norm"] = report.first_update_norm;
  result["effective_solves"] = report.counters.effective();
  result["total_solves"] = report.counters.total();
  result["diagnostics"] = report.diagnostics;
  return result;
}

tpsolve::SplittingChoice parse_splitting(const std::string& name) {
  if (name == "product_jacobian") {
    return tpsolve::SplittingChoice::kProductJacobian;
  }
  if (name == "stiffness") {
    return tpsolve::SplittingChoice::kStiffness;
  }
  throw tpsolve::ConfigError(
      "splitting must be \"product_jacobian\" or \"stiffness\"");
}

tpsolve::StepSolver parse_step_solver(const std::string& name) {
  if (name == "newton") {
    return tpsolve::StepSolver::kNewton;
  }
  if (name == "substitution") {
    return tpsolve::StepSolver::kSuccessiveSubstitution;
  }
  throw tpsolve::ConfigError("step_solver must be \"newton\" or \"substitution\"");
}

tpsolve::CoarseScheme parse_coarse_scheme(const std::string& name) {
  if (name == "implicit_euler") {
    return tpsolve::CoarseScheme::kImplicitEuler;
  }
  if (name == "trapezoidal") {
    return tpsolve::CoarseScheme::kTrapezoidal;
  }
  throw tpsolve::ConfigError(
      "coarse_scheme must be \"implicit_euler\" or \"trapezoidal\"");
}

py::dict solve(const std::string& method, const std::string& model,
               int windows, int steps_per_window, int interior_nodes,
               double period, double amplitude, int max_outer, int max_inner,
               double a_tol, double r_tol, double z, int workers,
               const std::string& splitting, const std::string& step_solver,
               const std::string& coarse_scheme) {
  const tpsolve::Method parsed_method = tpsolve::parse_method(method);
  tpsolve::ModelConfig model_config;
  model_config.name = model;
  model_config.interior_nodes = interior_nodes;
  model_config.period = period;
  model_config.amplitude = amplitude;

  tpsolve::SolverOptions options;
  options.max_outer = max_outer;
  options.max_inner = max_inner;
  options.a_tol = a_tol;
  options.r_tol = r_tol;
  options.z = z;
  options.propagator.step_solver = parse_step_solver(step_solver);
  options.propagator.coarse_scheme = parse_coarse_scheme(coarse_scheme);
  const tpsolve::SplittingChoice splitting_choice = parse_splitting(splitting);

  tpsolve::SolverReport report;
  {
    py::gil_scoped_release release;
    const tpsolve::PeriodicProblem problem = tpsolve::make_model(model_config);
    const tpsolve::TimeGrid grid(windows, steps_per_window, problem.period);
    const tpsolve::WorkerPool pool(
        tpsolve::resolve_workers(std::nullopt, workers));
    report = tpsolve::run_method(parsed_method, problem, grid, options,
                                 splitting_choice, pool);
  }
  return report_to_dict(report);
}

int run_experiment_file(const std::string& config_path,
                        const std::string& out_dir,
                        std::optional<int> workers) {
  tpsolve::ExperimentConfig config = tpsolve::load_config(config_path);
  if (workers.has_value()) {
    config.workers = *workers;
  }
  py::gil_scoped_release release;
  return tpsolve::run_experiment(config, out_dir, std::cout);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Solvers for time-periodic nonlinear ODE/DAE systems";

  m.def("solve", &solve, py::arg("method"), py::arg("model") = "rl1d",
        py::arg("windows") = 10, py::arg("steps_per_window") = 1,
        py::kw_only(), py::arg("interior_nodes") = 21, py::arg("period") = 1.0,
        py::arg("amplitude") = 0.8, py::arg("max_outer") = 50,
        py::arg("max_inner") = 100, py::arg("a_tol") = 1e-6,
        py::arg("r_tol") = 1e-3, py::arg("z") = 0.0, py::arg("workers") = 0,
        py::arg("splitting") = "product_jacobian",
        py::arg("step_solver") = "newton",
        py::arg("coarse_scheme") = "implicit_euler",
        "Run one solver on a built-in model and return the report as a dict");

  m.def("run_experiment", &run_experiment_file, py::arg("config"),
        py::arg("out"), py::arg("workers") = std::nullopt,
        "Run a JSON experiment config; writes report.json and CSV outputs "
        "into `out` and returns the process exit code");

  m.def(
      "mixed_norm",
      [](const tpsolve::Vector& u, const tpsolve::Vector& v, double a_tol,
         double r_tol) { return tpsolve::mixed_norm(u, v, a_tol, r_tol); },
      py::arg("u"), py::arg("v"), py::arg("a_tol") = 1e-6,
      py::arg("r_tol") = 1e-3,
      "Mixed error norm ||u - v|| / (a_tol + r_tol ||u||)");
}
