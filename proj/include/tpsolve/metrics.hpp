#pragma once

#include "tpsolve/types.hpp"

#include <vector>

namespace tpsolve {

/// One worker's share of the linear-solve accounting. A factorize-and-solve
/// and a back-substitution against a cached factorization each count as one
/// linear system solution; they are tallied separately so both totals stay
/// unambiguous.
struct WorkerTally {
  long long factor_solves = 0;
  long long cached_resolves = 0;

  [[nodiscard]] long long solves() const { return factor_solves + cached_resolves; }
};

/// Per-worker solve tallies for one run. Workers own disjoint slots, so
/// parallel sections mutate the counter without synchronization.
class SolveCounter {
 public:
  explicit SolveCounter(int workers = 1);

  [[nodiscard]] int workers() const { return static_cast<int>(per_worker_.size()); }
  [[nodiscard]] WorkerTally& tally(int worker) { return per_worker_.at(static_cast<size_t>(worker)); }
  [[nodiscard]] const WorkerTally& tally(int worker) const {
    return per_worker_.at(static_cast<size_t>(worker));
  }

  /// Wall-clock-relevant cost: the largest per-worker solve count.
  [[nodiscard]] long long effective() const;
  /// Aggregate cost across all workers.
  [[nodiscard]] long long total() const;

 private:
  std::vector<WorkerTally> per_worker_;
};

/// ||u - v|| / (a_tol + r_tol * ||u||), normalized by the first argument.
/// Values below 1 mean "within tolerance".
[[nodiscard]] double mixed_norm(const Eigen::Ref<const Vector>& u,
                                const Eigen::Ref<const Vector>& v, double a_tol, double r_tol);

/// Periodic defect of an iterate: the largest mixed norm among the interior
/// jumps ||U_n - fine_n||_* (n = 1..N-1) and the wrap-around jump
/// ||U_0 - fine_N||_*. Column n-1 of `fine` holds the fine propagation onto
/// point n; U holds points 0..N-1.
[[nodiscard]] double pp_error(const BlockVector& coarse_points, const BlockVector& fine,
                              double a_tol, double r_tol);

/// Largest per-block mixed norm between two successive iterates, normalized
/// by the newer one.
[[nodiscard]] double inner_error(const BlockVector& newer, const BlockVector& older, double a_tol,
                                 double r_tol);

}  // namespace tpsolve
