#pragma once

#include "tpsolve/types.hpp"

#include <cstdint>
#include <functional>

namespace tpsolve {

/// Time-periodic system  M u'(t) + K(u) u = j(t),  u(0) = u(T).
///
/// `stiffness_jacobian(x)` must be the derivative of the product x -> K(x) x,
/// not of K alone; for linear problems it coincides with `stiffness`.
struct PeriodicProblem {
  int dim = 0;
  double period = 0.0;
  Matrix mass;
  std::function<Matrix(const Vector&)> stiffness;
  std::function<Matrix(const Vector&)> stiffness_jacobian;
  std::function<Vector(double)> rhs;
  bool linear = false;
};

/// Wraps a constant-coefficient system. Throws SingularMatrixError when the
/// pencil K + lambda*M looks singular for several random lambda > 0 (the
/// implicit stepping below needs it regular for every positive step size).
[[nodiscard]] PeriodicProblem make_problem_linear(const Matrix& mass, const Matrix& stiffness,
                                                  std::function<Vector(double)> rhs, double period,
                                                  std::uint64_t probe_seed = 0x5eed);

/// Scalar problem with state-magnitude-dependent coefficient:
/// m u' + kappa(|u|) u = j(t). `kappa_prime` is d kappa / d s for s >= 0.
[[nodiscard]] PeriodicProblem make_problem_scalar_nonlinear(
    double mass, std::function<double(double)> kappa, std::function<double(double)> kappa_prime,
    std::function<double(double)> rhs, double period);

/// Uniform periodic grid: N windows of `steps_per_window` fine steps each.
/// Synchronization points are computed as n * (T/N), never accumulated, and
/// fine times are anchored at the enclosing synchronization point so that
/// propagating across a window boundary reproduces the same target times
/// bitwise no matter where the propagation started.
class TimeGrid {
 public:
  TimeGrid(int num_windows, int steps_per_window, double period);

  [[nodiscard]] int num_windows() const { return num_windows_; }
  [[nodiscard]] int steps_per_window() const { return steps_per_window_; }
  [[nodiscard]] double period() const { return period_; }
  [[nodiscard]] int total_fine_steps() const { return num_windows_ * steps_per_window_; }

  [[nodiscard]] double coarse_dt() const { return coarse_dt_; }
  [[nodiscard]] double fine_dt() const { return fine_dt_; }

  /// T_n = n * (T/N) for n in [0, N].
  [[nodiscard]] double sync_point(int n) const;
  /// Time of global fine step i in [0, N * steps_per_window].
  [[nodiscard]] double fine_time(int i) const;
  /// Global fine index whose time matches t (within 1e-9 * T), else throws.
  [[nodiscard]] int fine_index(double t) const;

 private:
  int num_windows_;
  int steps_per_window_;
  double period_;
  double coarse_dt_;
  double fine_dt_;
};

}  // namespace tpsolve
