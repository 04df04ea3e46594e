#pragma once

#include "tpsolve/parallel.hpp"
#include "tpsolve/problem.hpp"
#include "tpsolve/propagators.hpp"
#include "tpsolve/report.hpp"

#include <optional>

namespace tpsolve {

/// Knobs shared by all drivers.  `z` (or `z_vector`) is the expansion point
/// of the frequency-domain quasi-Jacobian and the initial guess of the
/// time-parallel sweeps; the defaults match the error norms used for
/// termination throughout (a value below 1 means "within tolerance").
struct SolverOptions {
  int max_outer = 50;
  int max_inner = 100;
  double a_tol = 1e-6;
  double r_tol = 1e-3;
  double z = 0.0;
  std::optional<Vector> z_vector;
  bool record_iterates = false;
  PropagatorConfig propagator;
};

/// Time stepping period by period until two consecutive period-end states
/// agree in the mixed norm.  outer_iterations = periods marched; the
/// solution is sampled at the synchronization points of the last period.
SolverReport sequential_steady_state(const PeriodicProblem& problem,
                                     const TimeGrid& grid,
                                     const SolverOptions& options,
                                     const WorkerPool& pool);

/// Parareal with the periodicity handled by the initial condition update
/// U_0^{k+1} = U_N^k; the corrector sweep propagates the new coarse values
/// sequentially.  No inner iteration, so inner_iterations stays empty and
/// error_history[0] is the defect of the all-zero initial iterate.
SolverReport pp_ic(const PeriodicProblem& problem, const TimeGrid& grid,
                   const SolverOptions& options, const WorkerPool& pool);

/// Periodic parareal with the periodic coarse system solved by a Jacobi-type
/// fixed point of coarse steps (one step per window per sweep, all windows
/// in parallel).  Hitting max_inner is recorded as a diagnostic, not an
/// error: the outer loop continues with the last sweep iterate.
SolverReport pp_pc_jacobi(const PeriodicProblem& problem, const TimeGrid& grid,
                          const SolverOptions& options, const WorkerPool& pool);

/// Periodic parareal with the periodic coarse system solved in the frequency
/// domain.  Dispatches to pp_pc_mh_linear for linear problems and to
/// pp_pc_mh_newton otherwise.
SolverReport pp_pc_mh(const PeriodicProblem& problem, const TimeGrid& grid,
                      const SolverOptions& options, const WorkerPool& pool);

/// Frequency-domain coarse correction via one direct harmonic solve per
/// outer iteration (linear problems; every inner_iterations entry is 1).
SolverReport pp_pc_mh_linear(const PeriodicProblem& problem,
                             const TimeGrid& grid, const SolverOptions& options,
                             const WorkerPool& pool);

/// Frequency-domain coarse correction via simplified Newton sweeps with the
/// quasi-Jacobian frozen at z.  On a linear problem the split is exact, the
/// detection short-circuits the sweep loop, and each inner count is 1.
SolverReport pp_pc_mh_newton(const PeriodicProblem& problem,
                             const TimeGrid& grid, const SolverOptions& options,
                             const WorkerPool& pool);

/// Direct time-periodic solve on the full fine grid: simplified Newton with
/// the frequency-domain quasi-Jacobian frozen at z.  outer_iterations counts
/// Newton sweeps; first_update_norm feeds the contraction estimates.
SolverReport tp_mh(const PeriodicProblem& problem, const TimeGrid& grid,
                   const SolverOptions& options, const WorkerPool& pool);

/// Which frozen operator the generic splitting iteration uses for the
/// diagonal blocks H = coupling + (...)(z).
enum class SplittingChoice { kProductJacobian, kStiffness };

/// Generic additive splitting iteration on the full fine grid:
/// H u^{s+1} = H u^s - R(u^s), with H block-diagonalized per frequency.
/// kProductJacobian reproduces tp_mh bit for bit.
SolverReport splitting_iteration(const PeriodicProblem& problem,
                                 const TimeGrid& grid, SplittingChoice choice,
                                 const SolverOptions& options,
                                 const WorkerPool& pool);

/// Right-hand-side pairing of the periodic coarse system for a given
/// fine-minus-coarse defect b (d x N, column n = defect at T_{n+1}):
/// row m couples to beta_m = b_N for m = 0, b_m otherwise, and to the
/// forcing sample gamma_m taken at the same target point (endpoint value
/// for implicit Euler, endpoint average for the trapezoidal scheme).
struct DefectData {
  BlockVector beta;
  BlockVector gamma;
};

DefectData assemble_defects(const PeriodicProblem& problem,
                            const TimeGrid& grid, const BlockVector& b,
                            CoarseScheme scheme);

/// Residual of the periodic system shifted by beta:
/// R_m = (coupling + K(U_m - beta_m)) (U_m - beta_m)
///       - coupling U_{m-1 mod N} - gamma_m.
BlockVector residual_shifted(const PeriodicProblem& problem,
                             const Matrix& coupling, const BlockVector& beta,
                             const BlockVector& gamma, const BlockVector& u);

}  // namespace tpsolve
