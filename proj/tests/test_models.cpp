#include "tpsolve/models.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace tpsolve;

TEST_CASE("saturating curve matches the branch formulas and is C1") {
  const PiecewiseCubic curve = make_saturating_curve();

  for (double s : {0.0, 0.03, 0.09999, 0.1, 0.15, 0.19999, 0.2, 0.5, 3.0}) {
    CHECK(curve.value(s) == doctest::Approx(oracle::saturating_kappa(s)).epsilon(1e-14));
    CHECK(curve.derivative(s) ==
          doctest::Approx(oracle::saturating_kappa_prime(s)).epsilon(1e-12));
  }

  // Continuity of value and slope across the joints.
  for (double joint : {0.1, 0.2}) {
    const double eps = 1e-9;
    CHECK(curve.value(joint - eps) == doctest::Approx(curve.value(joint + eps)).epsilon(1e-6));
    CHECK(curve.derivative(joint - eps) ==
          doctest::Approx(curve.derivative(joint + eps)).epsilon(1e-4));
  }

  // Negative arguments clamp to s = 0.
  CHECK(curve.value(-1.0) == curve.value(0.0));

  // Derivatives against central differences at a smooth interior point.
  const double s = 0.05;
  const double h = 1e-6;
  const double fd1 = (curve.value(s + h) - curve.value(s - h)) / (2.0 * h);
  const double fd2 =
      (curve.value(s + h) - 2.0 * curve.value(s) + curve.value(s - h)) / (h * h);
  CHECK(curve.derivative(s) == doctest::Approx(fd1).epsilon(1e-8));
  CHECK(curve.second_derivative(s) == doctest::Approx(fd2).epsilon(1e-3));
  CHECK(curve.product_derivative(s) ==
        doctest::Approx(curve.value(s) + s * curve.derivative(s)).epsilon(1e-14));
}

TEST_CASE("piecewise cubic validates its piece list") {
  using Piece = PiecewiseCubic::Piece;
  CHECK_THROWS_AS(PiecewiseCubic({}), std::invalid_argument);
  CHECK_THROWS_AS(PiecewiseCubic({Piece{0.5, {1, 0, 0, 0}}}), std::invalid_argument);
  CHECK_THROWS_AS(PiecewiseCubic({Piece{0.0, {1, 0, 0, 0}}, Piece{0.0, {1, 0, 0, 0}}}),
                  std::invalid_argument);
}

TEST_CASE("circuit model wires the saturating coefficient into a scalar problem") {
  const PeriodicProblem problem = rl_circuit_1d();
  CHECK(problem.dim == 1);
  CHECK(problem.period == doctest::Approx(0.02));
  CHECK_FALSE(problem.linear);
  CHECK(problem.mass(0, 0) == doctest::Approx(0.1));
  CHECK(problem.rhs(0.005)[0] == doctest::Approx(1e-3).epsilon(1e-12));  // peak of the sine
  CHECK(problem.stiffness(Vector::Zero(1))(0, 0) == doctest::Approx(1.0));
  // In the rising piece: kappa(0.05) = -5 (0.05)^3 + 1.5 (0.05)^2 + 1.
  CHECK(problem.stiffness(Vector::Constant(1, 0.05))(0, 0) ==
        doctest::Approx(1.0 + 1.5 * 0.0025 - 5.0 * 0.000125).epsilon(1e-14));
}

TEST_CASE("nonlinear diffusion assembles the classic stencil at rest") {
  const int nodes = 5;
  const double spacing = 1.0 / 6.0;
  const PeriodicProblem problem = nonlinear_diffusion_1d(nodes);
  CHECK(problem.dim == nodes);
  CHECK_FALSE(problem.linear);
  CHECK((problem.mass - spacing * Matrix::Identity(nodes, nodes)).norm() == 0.0);

  // kappa(0) = 1, so K(0) must be the [-1, 2, -1]/h tridiagonal.
  const Matrix at_rest = problem.stiffness(Vector::Zero(nodes));
  for (int i = 0; i < nodes; ++i) {
    CHECK(at_rest(i, i) == doctest::Approx(2.0 / spacing).epsilon(1e-14));
    if (i > 0) CHECK(at_rest(i, i - 1) == doctest::Approx(-1.0 / spacing).epsilon(1e-14));
    if (i + 1 < nodes) CHECK(at_rest(i, i + 1) == doctest::Approx(-1.0 / spacing).epsilon(1e-14));
  }
  CHECK(at_rest(0, 2) == 0.0);

  // The linear variant carries exactly that matrix for every state.
  const PeriodicProblem linear = linear_diffusion_1d(nodes);
  CHECK(linear.linear);
  CHECK((linear.stiffness(Vector::Ones(nodes)) - at_rest).norm() <= 1e-14 * at_rest.norm());

  CHECK_THROWS_AS(nonlinear_diffusion_1d(0), std::invalid_argument);
  CHECK_THROWS_AS(linear_diffusion_1d(3, -1.0), std::invalid_argument);
}

TEST_CASE("diffusion quasi-jacobian is the derivative of u -> K(u) u") {
  const int nodes = 5;
  const PeriodicProblem problem = nonlinear_diffusion_1d(nodes);

  // Small state: all edge slopes stay inside the first curve piece, so the
  // finite difference does not straddle a joint.
  Vector u(nodes);
  u << 0.003, -0.001, 0.004, 0.002, -0.003;

  const Matrix analytic = problem.stiffness_jacobian(u);
  const Matrix numeric = oracle::fd_product_jacobian(problem, u, 1e-7);
  CHECK((analytic - numeric).norm() <= 1e-5 * analytic.norm());
}

TEST_CASE("diffusion forcing is the scaled product of the two sines") {
  const int nodes = 3;
  const double spacing = 0.25;
  const double amplitude = 0.8;
  const PeriodicProblem problem = nonlinear_diffusion_1d(nodes, 1.0, amplitude);
  const Vector j = problem.rhs(0.25);  // sin(2 pi t / T) = 1
  for (int i = 0; i < nodes; ++i) {
    const double x = (i + 1) * spacing;
    CHECK(j[i] == doctest::Approx(spacing * amplitude * std::sin(M_PI * x)).epsilon(1e-14));
  }
}

TEST_CASE("monotonicity constants of the saturating curve are exact") {
  const PiecewiseCubic curve = make_saturating_curve();
  const ConvergenceConstants constants = estimate_constants(curve, 0.2);

  CHECK(constants.c1 == 1.0);  // attained at s = 0, no sampling error
  CHECK(constants.l2 == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(constants.delta0 == doctest::Approx(0.6).epsilon(1e-12));

  // Restricting to the first piece drops the extreme at the second joint.
  const ConvergenceConstants first = estimate_constants(curve, 0.1);
  CHECK(first.c1 == 1.0);
  CHECK(first.l2 == doctest::Approx(0.3375).epsilon(1e-12));  // vertex at s = 0.075

  CHECK_THROWS_AS(estimate_constants(curve, 0.0), std::invalid_argument);

  // A decreasing product derivative is rejected.
  const PiecewiseCubic falling({PiecewiseCubic::Piece{0.0, {1.0, -2.0, 0.0, 0.0}}});
  CHECK_THROWS_AS(estimate_constants(falling, 1.0), std::domain_error);
}

TEST_CASE("contraction indicators follow the half-threshold rule") {
  const ConvergenceConstants constants{1.0, 0.6, 0.6};

  const NewtonContraction good = newton_contraction(constants, 0.5);
  CHECK(good.h0 == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(good.contraction);
  CHECK(good.rho == doctest::Approx((1.0 - std::sqrt(0.4)) / 0.6).epsilon(1e-14));

  const NewtonContraction bad = newton_contraction(constants, 1.0);
  CHECK(bad.h0 == doctest::Approx(0.6).epsilon(1e-14));
  CHECK_FALSE(bad.contraction);
  CHECK(std::isnan(bad.rho));

  // A constant coefficient has delta0 = 0: one correction is exact and the
  // indicator degenerates to the first update norm.
  const NewtonContraction flat = newton_contraction(ConvergenceConstants{1.0, 0.0, 0.0}, 0.25);
  CHECK(flat.h0 == 0.0);
  CHECK(flat.contraction);
  CHECK(flat.rho == doctest::Approx(0.25));
}
