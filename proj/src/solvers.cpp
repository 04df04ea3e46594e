#include "tpsolve/solvers.hpp"

#include "tpsolve/block_cyclic.hpp"
#include "tpsolve/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace tpsolve {
namespace {

// Iteration errors beyond this are treated as divergence, not slow progress.
constexpr double kDivergenceGuard = 1e10;

std::string format_error(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.3g", value);
  return buffer;
}

bool diverged(double eps) {
  return !std::isfinite(eps) || eps > kDivergenceGuard;
}

Vector expansion_point(const PeriodicProblem& problem,
                       const SolverOptions& options) {
  if (options.z_vector.has_value()) {
    if (options.z_vector->size() != problem.dim) {
      throw std::invalid_argument("solver: z_vector dimension mismatch");
    }
    return *options.z_vector;
  }
  return Vector::Constant(problem.dim, options.z);
}

std::vector<double> sync_times(const TimeGrid& grid) {
  std::vector<double> times(static_cast<size_t>(grid.num_windows()));
  for (int n = 0; n < grid.num_windows(); ++n) {
    times[static_cast<size_t>(n)] = grid.sync_point(n);
  }
  return times;
}

std::vector<double> fine_target_times(const TimeGrid& grid) {
  std::vector<double> times(static_cast<size_t>(grid.total_fine_steps()));
  for (int i = 1; i <= grid.total_fine_steps(); ++i) {
    times[static_cast<size_t>(i - 1)] = grid.fine_time(i);
  }
  return times;
}

struct SweepResult {
  BlockVector fine;
  BlockVector coarse;
};

// Fine and coarse propagation from every window start in one parallel
// section; column n of either output is the value carried onto T_{n+1}.
// Window n runs on worker n % workers.
SweepResult propagate_windows(const PeriodicProblem& problem,
                              const TimeGrid& grid, const BlockVector& u,
                              const SolverOptions& options,
                              const WorkerPool& pool, SolveCounter& counter) {
  const int windows = grid.num_windows();
  SweepResult result{BlockVector(problem.dim, windows),
                     BlockVector(problem.dim, windows)};
  pool.run(windows, [&](int n, int worker) {
    WorkerTally& tally = counter.tally(worker);
    result.fine.col(n) =
        propagate_fine(problem, grid, n, u.col(n), options.propagator, tally);
    result.coarse.col(n) = propagate_coarse(problem, grid, n, u.col(n),
                                            options.propagator, tally);
  });
  return result;
}

// Diagonal and coupling blocks of the periodic coarse system for a linear
// problem under the configured coarse scheme.
void linear_coarse_blocks(const PeriodicProblem& problem, const TimeGrid& grid,
                          CoarseScheme scheme, Matrix& h_diag,
                          Matrix& coupling) {
  const Matrix stiffness = problem.stiffness(Vector::Zero(problem.dim));
  const Matrix mass_over_dt = problem.mass / grid.coarse_dt();
  if (scheme == CoarseScheme::kTrapezoidal) {
    h_diag = mass_over_dt + 0.5 * stiffness;
    coupling = mass_over_dt - 0.5 * stiffness;
  } else {
    h_diag = mass_over_dt + stiffness;
    coupling = mass_over_dt;
  }
}

}  // namespace

DefectData assemble_defects(const PeriodicProblem& problem,
                            const TimeGrid& grid, const BlockVector& b,
                            CoarseScheme scheme) {
  const int windows = grid.num_windows();
  if (b.rows() != problem.dim || b.cols() != windows) {
    throw std::invalid_argument("assemble_defects: defect shape mismatch");
  }
  DefectData data{BlockVector(problem.dim, windows),
                  BlockVector(problem.dim, windows)};
  for (int m = 0; m < windows; ++m) {
    const int target = m == 0 ? windows : m;
    data.beta.col(m) = b.col(target - 1);
    // Sample forcing exactly where the coarse propagator does (start + dt),
    // so a one-step-per-window fine grid reproduces the coarse sweep bitwise.
    const double start = grid.sync_point(target - 1);
    const double end = start + grid.coarse_dt();
    if (scheme == CoarseScheme::kTrapezoidal) {
      data.gamma.col(m) = 0.5 * (problem.rhs(start) + problem.rhs(end));
    } else {
      data.gamma.col(m) = problem.rhs(end);
    }
  }
  return data;
}

BlockVector residual_shifted(const PeriodicProblem& problem,
                             const Matrix& coupling, const BlockVector& beta,
                             const BlockVector& gamma, const BlockVector& u) {
  const long points = u.cols();
  if (beta.cols() != points || gamma.cols() != points ||
      u.rows() != problem.dim) {
    throw std::invalid_argument("residual_shifted: shape mismatch");
  }
  BlockVector residual(problem.dim, points);
  for (long m = 0; m < points; ++m) {
    const Vector shifted = u.col(m) - beta.col(m);
    const long prev = (m + points - 1) % points;
    residual.col(m) = (coupling + problem.stiffness(shifted)) * shifted -
                      coupling * u.col(prev) - gamma.col(m);
  }
  return residual;
}

SolverReport sequential_steady_state(const PeriodicProblem& problem,
                                     const TimeGrid& grid,
                                     const SolverOptions& options,
                                     const WorkerPool& pool) {
  SolverReport report;
  report.counters = SolveCounter(pool.workers());
  WorkerTally& tally = report.counters.tally(0);

  const int windows = grid.num_windows();
  Vector u = Vector::Zero(problem.dim);
  Vector previous_end = u;
  BlockVector samples(problem.dim, windows);
  report.error_history.push_back(1.0);

  for (int period = 0; period < options.max_outer; ++period) {
    for (int n = 0; n < windows; ++n) {
      samples.col(n) = u;
      u = propagate_fine(problem, grid, n, u, options.propagator, tally);
    }
    ++report.outer_iterations;
    const double eps = mixed_norm(u, previous_end, options.a_tol, options.r_tol);
    report.error_history.push_back(eps);
    previous_end = u;
    if (options.record_iterates) {
      report.iterates.push_back(samples);
    }
    if (eps < 1.0) {
      report.converged = true;
      break;
    }
    if (diverged(eps)) {
      report.diagnostics.push_back("divergence guard tripped (eps_seq=" +
                                   format_error(eps) + ")");
      break;
    }
  }
  if (!report.converged && report.diagnostics.empty()) {
    report.diagnostics.push_back("period cap reached before steady state");
  }
  report.solution = samples;
  report.solution_times = sync_times(grid);
  return report;
}

SolverReport pp_ic(const PeriodicProblem& problem, const TimeGrid& grid,
                   const SolverOptions& options, const WorkerPool& pool) {
  SolverReport report;
  report.counters = SolveCounter(pool.workers());
  const int windows = grid.num_windows();

  // Points T_0..T_N; the wrap state is carried explicitly because the
  // corrector feeds U_N^k back in as the next initial condition.
  BlockVector u = BlockVector::Zero(problem.dim, windows + 1);
  if (options.record_iterates) {
    report.iterates.push_back(u.leftCols(windows));
  }

  for (int k = 0;; ++k) {
    const BlockVector points = u.leftCols(windows);
    const SweepResult sweeps =
        propagate_windows(problem, grid, points, options, pool, report.counters);
    const double eps = pp_error(points, sweeps.fine, options.a_tol, options.r_tol);
    report.error_history.push_back(eps);
    if (eps < 1.0) {
      report.converged = true;
      break;
    }
    if (diverged(eps)) {
      report.diagnostics.push_back("divergence guard tripped (eps_pp=" +
                                   format_error(eps) + ")");
      break;
    }
    if (k == options.max_outer) {
      report.diagnostics.push_back("outer iteration cap reached");
      break;
    }

    BlockVector next(problem.dim, windows + 1);
    next.col(0) = u.col(windows);
    WorkerTally& sweep_tally = report.counters.tally(0);
    for (int n = 1; n <= windows; ++n) {
      next.col(n) = sweeps.fine.col(n - 1) +
                    propagate_coarse(problem, grid, n - 1, next.col(n - 1),
                                     options.propagator, sweep_tally) -
                    sweeps.coarse.col(n - 1);
    }
    u = std::move(next);
    ++report.outer_iterations;
    if (options.record_iterates) {
      report.iterates.push_back(u.leftCols(windows));
    }
  }

  report.solution = u.leftCols(windows);
  report.solution_times = sync_times(grid);
  return report;
}

namespace {

// Shared outer loop of the predictor-corrector family: the inner functor
// turns the current defect b and previous iterate into the next block
// iterate and appends its sweep count to the report.
template <typename Inner>
SolverReport pp_pc_outer(const PeriodicProblem& problem, const TimeGrid& grid,
                         const SolverOptions& options, const WorkerPool& pool,
                         Inner&& inner) {
  SolverReport report;
  report.counters = SolveCounter(pool.workers());
  const int windows = grid.num_windows();

  BlockVector u = BlockVector::Zero(problem.dim, windows);
  BlockVector fine = BlockVector::Zero(problem.dim, windows);
  BlockVector coarse = BlockVector::Zero(problem.dim, windows);
  report.error_history.push_back(1.0);
  if (options.record_iterates) {
    report.iterates.push_back(u);
  }

  for (int k = 0; k < options.max_outer && report.error_history.back() >= 1.0;
       ++k) {
    const BlockVector b = fine - coarse;
    u = inner(b, u, report);

    SweepResult sweeps =
        propagate_windows(problem, grid, u, options, pool, report.counters);
    fine = std::move(sweeps.fine);
    coarse = std::move(sweeps.coarse);

    const double eps = pp_error(u, fine, options.a_tol, options.r_tol);
    report.error_history.push_back(eps);
    ++report.outer_iterations;
    if (options.record_iterates) {
      report.iterates.push_back(u);
    }
    if (diverged(eps)) {
      report.diagnostics.push_back("divergence guard tripped (eps_pp=" +
                                   format_error(eps) + ")");
      break;
    }
  }

  report.converged = report.error_history.back() < 1.0;
  if (!report.converged && report.diagnostics.empty()) {
    report.diagnostics.push_back("outer iteration cap reached");
  }
  report.solution = u;
  report.solution_times = sync_times(grid);
  return report;
}

}  // namespace

SolverReport pp_pc_jacobi(const PeriodicProblem& problem, const TimeGrid& grid,
                          const SolverOptions& options,
                          const WorkerPool& pool) {
  const int windows = grid.num_windows();
  return pp_pc_outer(
      problem, grid, options, pool,
      [&](const BlockVector& b, const BlockVector& u_prev,
          SolverReport& report) {
        const DefectData defects =
            assemble_defects(problem, grid, b, options.propagator.coarse_scheme);
        BlockVector u = u_prev;
        int sweeps = 0;
        double eps = std::numeric_limits<double>::infinity();
        while (sweeps < options.max_inner) {
          BlockVector next(problem.dim, windows);
          pool.run(windows, [&](int m, int worker) {
            const int source = (m + windows - 1) % windows;
            next.col(m) =
                propagate_coarse(problem, grid, source, u.col(source),
                                 options.propagator,
                                 report.counters.tally(worker)) +
                defects.beta.col(m);
          });
          ++sweeps;
          eps = inner_error(next, u, options.a_tol, options.r_tol);
          u = std::move(next);
          if (eps < 1.0 || diverged(eps)) {
            break;
          }
        }
        if (diverged(eps)) {
          report.diagnostics.push_back("divergence guard tripped (eps_it=" +
                                       format_error(eps) + ")");
        } else if (eps >= 1.0) {
          report.diagnostics.push_back("inner sweep cap reached (eps_it=" +
                                       format_error(eps) + ")");
        }
        report.inner_iterations.push_back(sweeps);
        return u;
      });
}

SolverReport pp_pc_mh_linear(const PeriodicProblem& problem,
                             const TimeGrid& grid, const SolverOptions& options,
                             const WorkerPool& pool) {
  if (!problem.linear) {
    throw std::invalid_argument("pp_pc_mh_linear: problem is not linear");
  }
  Matrix h_diag;
  Matrix coupling;
  linear_coarse_blocks(problem, grid, options.propagator.coarse_scheme, h_diag,
                       coupling);
  BlockCyclicSolver solver(
      make_block_cyclic_system(std::move(h_diag), std::move(coupling),
                               grid.coarse_dt(), grid.period()),
      pool);

  return pp_pc_outer(
      problem, grid, options, pool,
      [&](const BlockVector& b, const BlockVector&, SolverReport& report) {
        const DefectData defects =
            assemble_defects(problem, grid, b, options.propagator.coarse_scheme);
        BlockVector rhs(problem.dim, grid.num_windows());
        for (int m = 0; m < grid.num_windows(); ++m) {
          rhs.col(m) = solver.system().h_diag * defects.beta.col(m) +
                       defects.gamma.col(m);
        }
        // One harmonic solve is exact for a linear coarse system.
        report.inner_iterations.push_back(1);
        return solver.solve(rhs, report.counters);
      });
}

SolverReport pp_pc_mh_newton(const PeriodicProblem& problem,
                             const TimeGrid& grid, const SolverOptions& options,
                             const WorkerPool& pool) {
  if (options.propagator.coarse_scheme == CoarseScheme::kTrapezoidal) {
    throw std::invalid_argument(
        "pp_pc_mh_newton: trapezoidal coarse scheme requires a linear "
        "problem");
  }
  const Vector z = expansion_point(problem, options);
  const Matrix coupling = problem.mass / grid.coarse_dt();
  const Matrix h_diag = coupling + problem.stiffness_jacobian(z);
  // When the problem is affine and the frozen Jacobian equals the true
  // stiffness, the first Newton sweep solves the coarse system exactly.
  const bool exact_one_sweep =
      problem.linear &&
      (h_diag.array() == (coupling + problem.stiffness(z)).array()).all();
  BlockCyclicSolver solver(
      make_block_cyclic_system(h_diag, coupling, grid.coarse_dt(),
                               grid.period()),
      pool);
  const int windows = grid.num_windows();

  return pp_pc_outer(
      problem, grid, options, pool,
      [&, z](const BlockVector& b, const BlockVector&, SolverReport& report) {
        const DefectData defects =
            assemble_defects(problem, grid, b, options.propagator.coarse_scheme);
        BlockVector u = z.replicate(1, windows) + defects.beta;
        int sweeps = 0;
        double eps = std::numeric_limits<double>::infinity();
        while (sweeps < options.max_inner) {
          const BlockVector residual = residual_shifted(
              problem, solver.system().coupling, defects.beta, defects.gamma, u);
          const BlockVector h = apply_block_cyclic(solver.system(), u) - residual;
          BlockVector next = solver.solve(h, report.counters);
          ++sweeps;
          if (exact_one_sweep) {
            u = std::move(next);
            eps = 0.0;
            break;
          }
          eps = inner_error(next, u, options.a_tol, options.r_tol);
          u = std::move(next);
          if (eps < 1.0 || diverged(eps)) {
            break;
          }
        }
        if (diverged(eps)) {
          report.diagnostics.push_back("divergence guard tripped (eps_it=" +
                                       format_error(eps) + ")");
        } else if (eps >= 1.0) {
          report.diagnostics.push_back("inner sweep cap reached (eps_it=" +
                                       format_error(eps) + ")");
        }
        report.inner_iterations.push_back(sweeps);
        return u;
      });
}

SolverReport pp_pc_mh(const PeriodicProblem& problem, const TimeGrid& grid,
                      const SolverOptions& options, const WorkerPool& pool) {
  return problem.linear ? pp_pc_mh_linear(problem, grid, options, pool)
                        : pp_pc_mh_newton(problem, grid, options, pool);
}

namespace {

SolverReport run_tp_splitting(const PeriodicProblem& problem,
                              const TimeGrid& grid, SplittingChoice choice,
                              const SolverOptions& options,
                              const WorkerPool& pool) {
  const int points = grid.total_fine_steps();
  const double dt = grid.fine_dt();
  const Vector z = expansion_point(problem, options);
  const Matrix coupling = problem.mass / dt;
  const Matrix h_diag =
      coupling + (choice == SplittingChoice::kProductJacobian
                      ? problem.stiffness_jacobian(z)
                      : problem.stiffness(z));
  // For a linear problem whose diagonal block is split exactly, the first
  // sweep already solves the full time-periodic system.
  const bool exact_one_sweep =
      problem.linear &&
      (h_diag.array() == (coupling + problem.stiffness(z)).array()).all();

  SolverReport report;
  report.counters = SolveCounter(pool.workers());
  BlockCyclicSolver solver(
      make_block_cyclic_system(h_diag, coupling, dt, grid.period()), pool);

  BlockVector gamma(problem.dim, points);
  for (int m = 0; m < points; ++m) {
    gamma.col(m) = problem.rhs(grid.fine_time(m + 1));
  }

  BlockVector u = z.replicate(1, points);
  report.error_history.push_back(1.0);
  if (options.record_iterates) {
    report.iterates.push_back(u);
  }

  if (exact_one_sweep) {
    const BlockVector start = u;
    u = solver.solve(gamma, report.counters);
    report.first_update_norm = (u - start).norm();
    report.error_history.push_back(0.0);
    report.outer_iterations = 1;
    report.inner_iterations.push_back(1);
    report.converged = true;
    if (options.record_iterates) {
      report.iterates.push_back(u);
    }
  } else {
    const BlockVector beta = BlockVector::Zero(problem.dim, points);
    double eps = std::numeric_limits<double>::infinity();
    while (report.outer_iterations < options.max_outer) {
      const BlockVector residual =
          residual_shifted(problem, solver.system().coupling, beta, gamma, u);
      const BlockVector h = apply_block_cyclic(solver.system(), u) - residual;
      BlockVector next = solver.solve(h, report.counters);
      if (report.outer_iterations == 0) {
        report.first_update_norm = (next - u).norm();
      }
      eps = inner_error(next, u, options.a_tol, options.r_tol);
      u = std::move(next);
      ++report.outer_iterations;
      report.inner_iterations.push_back(1);
      report.error_history.push_back(eps);
      if (options.record_iterates) {
        report.iterates.push_back(u);
      }
      if (eps < 1.0 || diverged(eps)) {
        break;
      }
    }
    report.converged = eps < 1.0;
    if (diverged(eps)) {
      report.diagnostics.push_back("divergence guard tripped (eps_it=" +
                                   format_error(eps) + ")");
    } else if (!report.converged) {
      report.diagnostics.push_back("sweep cap reached (eps_it=" +
                                   format_error(eps) + ")");
    }
  }

  report.solution = u;
  report.solution_times = fine_target_times(grid);
  return report;
}

}  // namespace

SolverReport tp_mh(const PeriodicProblem& problem, const TimeGrid& grid,
                   const SolverOptions& options, const WorkerPool& pool) {
  return run_tp_splitting(problem, grid, SplittingChoice::kProductJacobian,
                          options, pool);
}

SolverReport splitting_iteration(const PeriodicProblem& problem,
                                 const TimeGrid& grid, SplittingChoice choice,
                                 const SolverOptions& options,
                                 const WorkerPool& pool) {
  return run_tp_splitting(problem, grid, choice, options, pool);
}

}  // namespace tpsolve
