#pragma once

#include "tpsolve/metrics.hpp"
#include "tpsolve/types.hpp"

#include <string>
#include <vector>

namespace tpsolve {

/// Outcome of one solver run.
///
/// `error_history` holds the driver's governing error per outer iteration,
/// preceded by the recorded initial value (the sentinel 1.0 for the
/// corrector-style drivers, the k = 0 defect for pp_ic), so its length is
/// always outer_iterations + 1 and `converged` implies the last entry < 1.
/// `iterates` snapshots the block iterate per outer iteration including the
/// initial one (used for reproducibility checks and defect-size reporting).
struct SolverReport {
  bool converged = false;
  int outer_iterations = 0;
  std::vector<int> inner_iterations;
  std::vector<double> error_history;
  BlockVector solution;
  std::vector<double> solution_times;
  SolveCounter counters;
  std::vector<BlockVector> iterates;
  std::vector<std::string> diagnostics;
  /// Norm of the first correction taken by the direct time-periodic solvers
  /// (feeds the contraction estimates); 0 when not applicable.
  double first_update_norm = 0.0;
};

}  // namespace tpsolve
