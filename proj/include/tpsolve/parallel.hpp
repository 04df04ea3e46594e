#pragma once

#include <functional>

namespace tpsolve {

/// Runs index-based task sets over a fixed number of workers with a static
/// round-robin assignment: task i always executes on worker i % workers().
///
/// The assignment is part of the library contract, not a scheduling hint:
/// per-worker solve counters derive from it, and results must be bitwise
/// reproducible for a fixed worker count. Tasks must write only to their own
/// output slots; the pool performs no reductions.
class WorkerPool {
 public:
  explicit WorkerPool(int workers = 1);

  [[nodiscard]] int workers() const { return workers_; }

  /// Executes fn(task, worker) for task in [0, task_count). Worker 0 runs on
  /// the calling thread. The first exception (lowest worker index) is
  /// rethrown after all workers have joined.
  void run(int task_count, const std::function<void(int, int)>& fn) const;

 private:
  int workers_;
};

}  // namespace tpsolve
