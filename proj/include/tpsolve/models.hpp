#pragma once

#include "tpsolve/problem.hpp"

#include <vector>

namespace tpsolve {

/// Piecewise-cubic coefficient curve on s >= 0 with analytic derivatives.
/// Piece i is valid on [start_i, start_{i+1}) (the last piece extends to
/// infinity) and evaluates as a cubic in the local coordinate x = s - start_i.
class PiecewiseCubic {
 public:
  struct Piece {
    double start = 0.0;
    // value = c[0] + c[1] x + c[2] x^2 + c[3] x^3 with x = s - start
    double c[4] = {0.0, 0.0, 0.0, 0.0};
  };

  explicit PiecewiseCubic(std::vector<Piece> pieces);

  [[nodiscard]] double value(double s) const;
  [[nodiscard]] double derivative(double s) const;
  [[nodiscard]] double second_derivative(double s) const;

  /// d/ds (s * value(s)) = value(s) + s * derivative(s); this is the
  /// coefficient the quasi-Jacobians are assembled from.
  [[nodiscard]] double product_derivative(double s) const;

  [[nodiscard]] const std::vector<Piece>& pieces() const { return pieces_; }

 private:
  [[nodiscard]] const Piece& piece_at(double s) const;

  std::vector<Piece> pieces_;
};

/// Saturation curve shared by the example models:
///   [0.0, 0.1): -5 s^3 + 1.5 s^2 + 1
///   [0.1, 0.2): -5 (s-0.1)^3 + 0.15 (s-0.1) + 1.01
///   [0.2, inf): 1.02
/// C^1 everywhere, constant once saturated.
[[nodiscard]] PiecewiseCubic make_saturating_curve();

/// Lumped scalar circuit with saturating coefficient:
///   0.1 u' + kappa(|u|) u = 1e-3 sin(2 pi t / T),  T = 0.02.
[[nodiscard]] PeriodicProblem rl_circuit_1d();

/// 1D nonlinear diffusion on (0,1) with zero boundary values, discretized on
/// `interior_nodes` equidistant interior nodes (h = 1/(n+1)).  Edge
/// coefficients kappa(|(u_{i+1}-u_i)/h|) assemble a tridiagonal K(u); the
/// quasi-Jacobian uses the product derivative instead and equals the exact
/// derivative of u -> K(u) u.  Forcing: j_i(t) = h * amplitude *
/// sin(2 pi t / period) * sin(pi x_i).
[[nodiscard]] PeriodicProblem nonlinear_diffusion_1d(int interior_nodes,
                                                     double period = 1.0,
                                                     double amplitude = 0.8);

/// Same grid and forcing with unit coefficient, i.e. the linear heat
/// equation; K is the constant [-1, 2, -1]/h tridiagonal stencil.
[[nodiscard]] PeriodicProblem linear_diffusion_1d(int interior_nodes,
                                                  double period = 1.0,
                                                  double amplitude = 0.8);

/// Monotonicity/smoothness constants of a coefficient curve on [0, s_max],
/// computed exactly from the per-piece polynomials:
///   c1     = min of d/ds (s kappa(s))      (strong monotonicity constant)
///   l2     = max of |d^2/ds^2 (s kappa(s))|  (Lipschitz bound of the above)
///   delta0 = l2 / c1
struct ConvergenceConstants {
  double c1 = 0.0;
  double l2 = 0.0;
  double delta0 = 0.0;
};

[[nodiscard]] ConvergenceConstants estimate_constants(const PiecewiseCubic& curve,
                                                      double s_max);

/// Simplified-Newton contraction indicators for a measured first-update
/// norm rho1:  h0 = delta0 * rho1; the iteration is a contraction when
/// h0 < 1/2 with asymptotic factor rho = (1 - sqrt(1 - 2 h0)) / delta0
/// (rho -> rho1 as delta0 -> 0).  rho is NaN when h0 >= 1/2.
struct NewtonContraction {
  double h0 = 0.0;
  double rho = 0.0;
  bool contraction = false;
};

[[nodiscard]] NewtonContraction newton_contraction(
    const ConvergenceConstants& constants, double rho1);

}  // namespace tpsolve
