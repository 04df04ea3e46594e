#include "tpsolve/propagators.hpp"

#include "tpsolve/dense.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tpsolve {
namespace {

void check_step(double h, const char* where) {
  if (!(h > 0.0)) {
    throw std::invalid_argument(std::string(where) + ": step size must be positive");
  }
}

Vector solve_system_step(const PeriodicProblem& problem, const Vector& u_prev,
                         const Matrix& mass_over_h, const Vector& rhs,
                         const PropagatorConfig& config, WorkerTally& tally) {
  const double accept = config.step_tol * (1.0 + rhs.norm());

  if (problem.linear) {
    const Matrix system = mass_over_h + problem.stiffness(u_prev);
    Vector u = solve_dense(system, rhs, "implicit_euler_step");
    ++tally.factor_solves;
    return u;
  }

  Vector u = u_prev;
  double residual_norm = 0.0;
  for (int iteration = 0; iteration < config.max_step_iterations; ++iteration) {
    const Vector residual = mass_over_h * u + problem.stiffness(u) * u - rhs;
    residual_norm = residual.norm();
    if (residual_norm <= accept) {
      return u;
    }
    if (config.step_solver == StepSolver::kNewton) {
      const Matrix jacobian = mass_over_h + problem.stiffness_jacobian(u);
      u += solve_dense(jacobian, -residual, "implicit_euler_step");
    } else {
      const Matrix system = mass_over_h + problem.stiffness(u);
      u = solve_dense(system, rhs, "implicit_euler_step");
    }
    ++tally.factor_solves;
  }

  const Vector residual = mass_over_h * u + problem.stiffness(u) * u - rhs;
  residual_norm = residual.norm();
  if (residual_norm <= accept) {
    return u;
  }
  throw StepSolveError(
      "implicit step did not converge within " +
          std::to_string(config.max_step_iterations) + " iterations",
      residual_norm);
}

}  // namespace

Vector implicit_euler_step(const PeriodicProblem& problem, const Vector& u_prev,
                           double t_prev, double h,
                           const PropagatorConfig& config, WorkerTally& tally) {
  check_step(h, "implicit_euler_step");
  const Matrix mass_over_h = problem.mass / h;
  const Vector rhs = mass_over_h * u_prev + problem.rhs(t_prev + h);
  return solve_system_step(problem, u_prev, mass_over_h, rhs, config, tally);
}

Vector trapezoidal_step(const PeriodicProblem& problem, const Vector& u_prev,
                        double t_prev, double h, WorkerTally& tally) {
  check_step(h, "trapezoidal_step");
  if (!problem.linear) {
    throw std::invalid_argument(
        "trapezoidal_step: only defined for linear problems");
  }
  const Matrix mass_over_h = problem.mass / h;
  const Matrix half_stiffness = 0.5 * problem.stiffness(Vector::Zero(problem.dim));
  const Vector forcing = 0.5 * (problem.rhs(t_prev) + problem.rhs(t_prev + h));
  const Vector rhs = (mass_over_h - half_stiffness) * u_prev + forcing;
  Vector u = solve_dense(mass_over_h + half_stiffness, rhs, "trapezoidal_step");
  ++tally.factor_solves;
  return u;
}

Vector propagate_fine(const PeriodicProblem& problem, const TimeGrid& grid,
                      int window, const Vector& u_start,
                      const PropagatorConfig& config, WorkerTally& tally) {
  const int steps = grid.steps_per_window();
  const int first = window * steps;
  Vector u = u_start;
  for (int i = 0; i < steps; ++i) {
    const double t_prev = grid.fine_time(first + i);
    u = implicit_euler_step(problem, u, t_prev, grid.fine_dt(), config, tally);
  }
  return u;
}

Vector propagate_coarse(const PeriodicProblem& problem, const TimeGrid& grid,
                        int window, const Vector& u_start,
                        const PropagatorConfig& config, WorkerTally& tally) {
  const double t_prev = grid.sync_point(window);
  if (config.coarse_scheme == CoarseScheme::kTrapezoidal) {
    return trapezoidal_step(problem, u_start, t_prev, grid.coarse_dt(), tally);
  }
  return implicit_euler_step(problem, u_start, t_prev, grid.coarse_dt(), config,
                             tally);
}

}  // namespace tpsolve
