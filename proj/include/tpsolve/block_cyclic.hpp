#pragma once

#include "tpsolve/metrics.hpp"
#include "tpsolve/parallel.hpp"
#include "tpsolve/spectrum.hpp"
#include "tpsolve/types.hpp"

#include <optional>
#include <vector>

namespace tpsolve {

/// Block-cyclic linear system over one period,
///
///   row m:   h_diag * u_m - coupling * u_{m-1 mod N} = b_m,   m = 0..N-1,
///
/// with the same diagonal block in every row (required by the frequency
/// diagonalization).  Under the unitary DFT along the period the operator
/// becomes block-diagonal with blocks
///
///   G_j = h_diag - coupling * exp(-i dt omega_j).
struct BlockCyclicSystem {
  Matrix h_diag;    // d x d diagonal block
  Matrix coupling;  // d x d coupling to the previous point (cyclic)
  double dt = 0.0;  // grid spacing entering the frequency shift
  Spectrum spectrum;
};

BlockCyclicSystem make_block_cyclic_system(Matrix h_diag, Matrix coupling,
                                           double dt, double period);

/// Applies the block-cyclic operator in the time domain:
/// (G u)_m = h_diag u_m - coupling u_{m-1 mod N}.
BlockVector apply_block_cyclic(const BlockCyclicSystem& system,
                               const BlockVector& u);

/// Solves block-cyclic systems by FFT diagonalization with per-frequency LU
/// caching.  The first solve touching frequency j factors G_j and books one
/// factor+solve on the worker that owns j; every later solve books a cached
/// re-solve.  Frequency j is always handled by worker j % workers, so the
/// counters are reproducible and the solution does not depend on the worker
/// count at all.
class BlockCyclicSolver {
 public:
  BlockCyclicSolver(BlockCyclicSystem system, const WorkerPool& pool);

  /// Right-hand side and result are d x N, one column per time point.
  BlockVector solve(const BlockVector& rhs, SolveCounter& counter);

  /// Largest imaginary magnitude discarded by the most recent solve.
  [[nodiscard]] double last_imag_residue() const { return last_imag_residue_; }

  [[nodiscard]] const BlockCyclicSystem& system() const { return system_; }

  /// Cached factorization of G_j; throws if frequency j was never solved.
  [[nodiscard]] const Eigen::PartialPivLU<ComplexMatrix>& factor(
      int frequency_index) const;

 private:
  BlockCyclicSystem system_;
  const WorkerPool* pool_;
  std::vector<std::optional<Eigen::PartialPivLU<ComplexMatrix>>> factors_;
  double last_imag_residue_ = 0.0;
};

/// One-shot convenience wrapper around BlockCyclicSolver.
BlockVector solve_block_cyclic_mh(const BlockCyclicSystem& system,
                                  const BlockVector& rhs,
                                  const WorkerPool& pool,
                                  SolveCounter& counter);

}  // namespace tpsolve
