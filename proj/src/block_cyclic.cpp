#include "tpsolve/block_cyclic.hpp"

#include "tpsolve/dense.hpp"
#include "tpsolve/dft.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

namespace tpsolve {

BlockCyclicSystem make_block_cyclic_system(Matrix h_diag, Matrix coupling,
                                           double dt, double period) {
  const long dim = h_diag.rows();
  if (dim == 0 || h_diag.cols() != dim) {
    throw std::invalid_argument("block_cyclic: h_diag must be square");
  }
  if (coupling.rows() != dim || coupling.cols() != dim) {
    throw std::invalid_argument("block_cyclic: coupling must match h_diag");
  }
  if (!(dt > 0.0) || !(period > 0.0)) {
    throw std::invalid_argument("block_cyclic: dt and period must be positive");
  }
  const double points = period / dt;
  const int num_points = static_cast<int>(points + 0.5);
  if (num_points < 1 || std::abs(points - num_points) > 1e-9 * num_points) {
    throw std::invalid_argument("block_cyclic: period must be a multiple of dt");
  }

  BlockCyclicSystem system;
  system.h_diag = std::move(h_diag);
  system.coupling = std::move(coupling);
  system.dt = dt;
  system.spectrum = build_spectrum(num_points, period);
  return system;
}

BlockVector apply_block_cyclic(const BlockCyclicSystem& system,
                               const BlockVector& u) {
  const long dim = system.h_diag.rows();
  const int num_points = system.spectrum.size();
  if (u.rows() != dim || u.cols() != num_points) {
    throw std::invalid_argument("apply_block_cyclic: operand shape mismatch");
  }
  BlockVector result(dim, num_points);
  for (int m = 0; m < num_points; ++m) {
    const int prev = (m + num_points - 1) % num_points;
    result.col(m) = system.h_diag * u.col(m) - system.coupling * u.col(prev);
  }
  return result;
}

BlockCyclicSolver::BlockCyclicSolver(BlockCyclicSystem system,
                                     const WorkerPool& pool)
    : system_(std::move(system)),
      pool_(&pool),
      factors_(static_cast<size_t>(system_.spectrum.size())) {}

BlockVector BlockCyclicSolver::solve(const BlockVector& rhs,
                                     SolveCounter& counter) {
  const long dim = system_.h_diag.rows();
  const int num_points = system_.spectrum.size();
  if (rhs.rows() != dim || rhs.cols() != num_points) {
    throw std::invalid_argument("block_cyclic: rhs shape mismatch");
  }

  const ComplexBlockVector rhs_hat = dft_forward(rhs, system_.spectrum);
  ComplexBlockVector solution_hat(dim, num_points);

  pool_->run(num_points, [&](int j, int worker) {
    auto& slot = factors_[static_cast<size_t>(j)];
    bool freshly_factored = false;
    if (!slot.has_value()) {
      const std::complex<double> shift =
          std::exp(std::complex<double>(0.0, -system_.dt * system_.spectrum.omega[j]));
      const ComplexMatrix block =
          system_.h_diag.cast<std::complex<double>>() -
          system_.coupling.cast<std::complex<double>>() * shift;
      slot.emplace(block);
      check_pivots(*slot, "block_cyclic", j);
      freshly_factored = true;
    }
    solution_hat.col(j) = slot->solve(rhs_hat.col(j));
    auto& tally = counter.tally(worker);
    if (freshly_factored) {
      ++tally.factor_solves;
    } else {
      ++tally.cached_resolves;
    }
  });

  return dft_inverse_real(solution_hat, system_.spectrum, &last_imag_residue_);
}

const Eigen::PartialPivLU<ComplexMatrix>& BlockCyclicSolver::factor(
    int frequency_index) const {
  if (frequency_index < 0 ||
      frequency_index >= static_cast<int>(factors_.size()) ||
      !factors_[static_cast<size_t>(frequency_index)].has_value()) {
    throw std::out_of_range("block_cyclic: frequency not factored yet");
  }
  return *factors_[static_cast<size_t>(frequency_index)];
}

BlockVector solve_block_cyclic_mh(const BlockCyclicSystem& system,
                                  const BlockVector& rhs,
                                  const WorkerPool& pool,
                                  SolveCounter& counter) {
  BlockCyclicSolver solver(system, pool);
  return solver.solve(rhs, counter);
}

}  // namespace tpsolve
