#include "tpsolve/parallel.hpp"

#include <exception>
#include <stdexcept>
#include <thread>
#include <vector>

namespace tpsolve {

WorkerPool::WorkerPool(int workers) : workers_(workers) {
  if (workers < 1) throw std::invalid_argument("WorkerPool: workers must be >= 1");
}

void WorkerPool::run(int task_count, const std::function<void(int, int)>& fn) const {
  if (task_count <= 0) return;
  const int active = std::min(workers_, task_count);
  if (active == 1) {
    for (int i = 0; i < task_count; ++i) fn(i, 0);
    return;
  }

  std::vector<std::exception_ptr> errors(static_cast<size_t>(active));
  auto worker_loop = [&](int w) {
    try {
      for (int i = w; i < task_count; i += workers_) fn(i, w);
    } catch (...) {
      errors[static_cast<size_t>(w)] = std::current_exception();
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(static_cast<size_t>(active - 1));
  for (int w = 1; w < active; ++w) threads.emplace_back(worker_loop, w);
  worker_loop(0);
  for (auto& t : threads) t.join();

  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace tpsolve
