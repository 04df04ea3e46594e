#pragma once

#include "tpsolve/metrics.hpp"
#include "tpsolve/problem.hpp"
#include "tpsolve/types.hpp"

namespace tpsolve {

/// How the per-step implicit system A(u) u = rhs is driven to its root.
enum class StepSolver { kNewton, kSuccessiveSubstitution };

/// Time discretization of the coarse propagator.  Trapezoidal is only
/// admissible for linear problems.
enum class CoarseScheme { kImplicitEuler, kTrapezoidal };

struct PropagatorConfig {
  StepSolver step_solver = StepSolver::kNewton;
  CoarseScheme coarse_scheme = CoarseScheme::kImplicitEuler;
  /// A step accepts u once ||A(u) u - rhs|| <= step_tol * (1 + ||rhs||).
  double step_tol = 1e-10;
  int max_step_iterations = 50;
};

/// One implicit Euler step of M u' + K(u) u = j over [t_prev, t_prev + h]:
/// solves (M/h + K(u)) u = (M/h) u_prev + j(t_prev + h).  Every linear solve
/// is booked on `tally`; a linear problem takes exactly one.
Vector implicit_euler_step(const PeriodicProblem& problem, const Vector& u_prev,
                           double t_prev, double h,
                           const PropagatorConfig& config, WorkerTally& tally);

/// One trapezoidal step for a linear problem:
/// (M/h + K/2) u = (M/h - K/2) u_prev + (j(t_prev) + j(t_prev + h)) / 2.
Vector trapezoidal_step(const PeriodicProblem& problem, const Vector& u_prev,
                        double t_prev, double h, WorkerTally& tally);

/// Fine propagation across window n: steps_per_window implicit Euler steps
/// whose start times come from the grid's anchored fine_time(), so chaining
/// windows reproduces one long sweep bit for bit.
Vector propagate_fine(const PeriodicProblem& problem, const TimeGrid& grid,
                      int window, const Vector& u_start,
                      const PropagatorConfig& config, WorkerTally& tally);

/// Coarse propagation across window n: a single step of the configured
/// scheme.  With kImplicitEuler and steps_per_window == 1 this is bitwise
/// identical to propagate_fine.
Vector propagate_coarse(const PeriodicProblem& problem, const TimeGrid& grid,
                        int window, const Vector& u_start,
                        const PropagatorConfig& config, WorkerTally& tally);

}  // namespace tpsolve
