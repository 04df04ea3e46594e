#include "tpsolve/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace tpsolve {
namespace {

double horner3(const double* c, double x) {
  return c[0] + x * (c[1] + x * (c[2] + x * c[3]));
}

}  // namespace

PiecewiseCubic::PiecewiseCubic(std::vector<Piece> pieces)
    : pieces_(std::move(pieces)) {
  if (pieces_.empty()) {
    throw std::invalid_argument("PiecewiseCubic: at least one piece required");
  }
  if (pieces_.front().start != 0.0) {
    throw std::invalid_argument("PiecewiseCubic: first piece must start at 0");
  }
  for (size_t i = 1; i < pieces_.size(); ++i) {
    if (!(pieces_[i].start > pieces_[i - 1].start)) {
      throw std::invalid_argument(
          "PiecewiseCubic: piece starts must be strictly increasing");
    }
  }
}

const PiecewiseCubic::Piece& PiecewiseCubic::piece_at(double s) const {
  s = std::max(s, 0.0);
  size_t index = pieces_.size() - 1;
  while (index > 0 && pieces_[index].start > s) {
    --index;
  }
  return pieces_[index];
}

double PiecewiseCubic::value(double s) const {
  const Piece& piece = piece_at(s);
  return horner3(piece.c, std::max(s, 0.0) - piece.start);
}

double PiecewiseCubic::derivative(double s) const {
  const Piece& piece = piece_at(s);
  const double x = std::max(s, 0.0) - piece.start;
  return piece.c[1] + x * (2.0 * piece.c[2] + x * 3.0 * piece.c[3]);
}

double PiecewiseCubic::second_derivative(double s) const {
  const Piece& piece = piece_at(s);
  const double x = std::max(s, 0.0) - piece.start;
  return 2.0 * piece.c[2] + x * 6.0 * piece.c[3];
}

double PiecewiseCubic::product_derivative(double s) const {
  s = std::max(s, 0.0);
  return value(s) + s * derivative(s);
}

PiecewiseCubic make_saturating_curve() {
  return PiecewiseCubic({
      {0.0, {1.0, 0.0, 1.5, -5.0}},
      {0.1, {1.01, 0.15, 0.0, -5.0}},
      {0.2, {1.02, 0.0, 0.0, 0.0}},
  });
}

PeriodicProblem rl_circuit_1d() {
  const PiecewiseCubic curve = make_saturating_curve();
  const double period = 0.02;
  const double amplitude = 1e-3;
  return make_problem_scalar_nonlinear(
      0.1, [curve](double s) { return curve.value(s); },
      [curve](double s) { return curve.derivative(s); },
      [period, amplitude](double t) {
        return amplitude * std::sin(2.0 * std::numbers::pi * t / period);
      },
      period);
}

namespace {

std::function<Vector(double)> diffusion_forcing(int nodes, double spacing,
                                                double period,
                                                double amplitude) {
  return [nodes, spacing, period, amplitude](double t) {
    Vector forcing(nodes);
    const double pulse =
        amplitude * std::sin(2.0 * std::numbers::pi * t / period);
    for (int i = 0; i < nodes; ++i) {
      forcing[i] =
          spacing * pulse * std::sin(std::numbers::pi * (i + 1) * spacing);
    }
    return forcing;
  };
}

void check_diffusion_args(int interior_nodes, double period) {
  if (interior_nodes < 1) {
    throw std::invalid_argument("diffusion_1d: need at least one node");
  }
  if (!(period > 0.0)) {
    throw std::invalid_argument("diffusion_1d: period must be positive");
  }
}

}  // namespace

PeriodicProblem nonlinear_diffusion_1d(int interior_nodes, double period,
                                       double amplitude) {
  check_diffusion_args(interior_nodes, period);
  const PiecewiseCubic curve = make_saturating_curve();
  const int nodes = interior_nodes;
  const double spacing = 1.0 / (nodes + 1);

  // Tridiagonal assembly from the n+1 edge coefficients; boundary values
  // are zero, edge i sits between nodes i-1 and i.
  auto assemble = [nodes, spacing, curve](const Vector& u, bool jacobian) {
    auto gradient = [&u, nodes, spacing](int edge) {
      const double left = edge == 0 ? 0.0 : u[edge - 1];
      const double right = edge == nodes ? 0.0 : u[edge];
      return (right - left) / spacing;
    };
    auto coefficient = [&curve, jacobian](double slope) {
      return jacobian ? curve.product_derivative(slope) : curve.value(slope);
    };
    Matrix stiffness = Matrix::Zero(nodes, nodes);
    for (int i = 0; i < nodes; ++i) {
      const double lower = coefficient(std::abs(gradient(i)));
      const double upper = coefficient(std::abs(gradient(i + 1)));
      stiffness(i, i) = (lower + upper) / spacing;
      if (i > 0) {
        stiffness(i, i - 1) = -lower / spacing;
      }
      if (i + 1 < nodes) {
        stiffness(i, i + 1) = -upper / spacing;
      }
    }
    return stiffness;
  };

  PeriodicProblem problem;
  problem.dim = nodes;
  problem.period = period;
  problem.mass = spacing * Matrix::Identity(nodes, nodes);
  problem.stiffness = [assemble](const Vector& u) { return assemble(u, false); };
  problem.stiffness_jacobian = [assemble](const Vector& u) {
    return assemble(u, true);
  };
  problem.rhs = diffusion_forcing(nodes, spacing, period, amplitude);
  problem.linear = false;
  return problem;
}

PeriodicProblem linear_diffusion_1d(int interior_nodes, double period,
                                    double amplitude) {
  check_diffusion_args(interior_nodes, period);
  const int nodes = interior_nodes;
  const double spacing = 1.0 / (nodes + 1);

  Matrix stiffness = Matrix::Zero(nodes, nodes);
  for (int i = 0; i < nodes; ++i) {
    stiffness(i, i) = 2.0 / spacing;
    if (i > 0) {
      stiffness(i, i - 1) = -1.0 / spacing;
    }
    if (i + 1 < nodes) {
      stiffness(i, i + 1) = -1.0 / spacing;
    }
  }
  return make_problem_linear(spacing * Matrix::Identity(nodes, nodes),
                             stiffness,
                             diffusion_forcing(nodes, spacing, period, amplitude),
                             period);
}

ConvergenceConstants estimate_constants(const PiecewiseCubic& curve,
                                        double s_max) {
  if (!(s_max > 0.0)) {
    throw std::invalid_argument("estimate_constants: s_max must be positive");
  }

  double c1 = std::numeric_limits<double>::infinity();
  double l2 = 0.0;
  const auto& pieces = curve.pieces();
  for (size_t i = 0; i < pieces.size(); ++i) {
    const PiecewiseCubic::Piece& piece = pieces[i];
    if (piece.start >= s_max) {
      break;
    }
    const double next_start =
        i + 1 < pieces.size() ? std::min(pieces[i + 1].start, s_max) : s_max;
    const double x_end = next_start - piece.start;
    const double a = piece.start;
    const double* c = piece.c;

    // d/ds (s kappa(s)) restricted to the piece, as a cubic in x = s - a,
    // and its derivative (a quadratic).
    const double d[4] = {c[0] + a * c[1], 2.0 * c[1] + 2.0 * a * c[2],
                         3.0 * c[2] + 3.0 * a * c[3], 4.0 * c[3]};
    const double q[3] = {d[1], 2.0 * d[2], 3.0 * d[3]};

    auto cubic = [&d](double x) { return d[0] + x * (d[1] + x * (d[2] + x * d[3])); };
    auto quadratic = [&q](double x) { return q[0] + x * (q[1] + x * q[2]); };
    auto inside = [x_end](double x) { return x > 0.0 && x < x_end; };

    // Extrema candidates: both piece ends plus interior stationary points.
    c1 = std::min({c1, cubic(0.0), cubic(x_end)});
    if (q[2] != 0.0) {
      const double disc = q[1] * q[1] - 4.0 * q[2] * q[0];
      if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        for (double x : {(-q[1] - root) / (2.0 * q[2]), (-q[1] + root) / (2.0 * q[2])}) {
          if (inside(x)) {
            c1 = std::min(c1, cubic(x));
          }
        }
      }
    } else if (q[1] != 0.0 && inside(-q[0] / q[1])) {
      c1 = std::min(c1, cubic(-q[0] / q[1]));
    }

    l2 = std::max({l2, std::abs(quadratic(0.0)), std::abs(quadratic(x_end))});
    if (q[2] != 0.0 && inside(-q[1] / (2.0 * q[2]))) {
      l2 = std::max(l2, std::abs(quadratic(-q[1] / (2.0 * q[2]))));
    }
  }

  if (!(c1 > 0.0)) {
    throw std::domain_error(
        "estimate_constants: curve is not strongly monotone on [0, s_max]");
  }
  return ConvergenceConstants{c1, l2, l2 / c1};
}

NewtonContraction newton_contraction(const ConvergenceConstants& constants,
                                     double rho1) {
  NewtonContraction result;
  result.h0 = constants.delta0 * rho1;
  result.contraction = result.h0 < 0.5;
  if (!result.contraction) {
    result.rho = std::numeric_limits<double>::quiet_NaN();
  } else if (constants.delta0 == 0.0) {
    result.rho = rho1;
  } else {
    result.rho = (1.0 - std::sqrt(1.0 - 2.0 * result.h0)) / constants.delta0;
  }
  return result;
}

}  // namespace tpsolve
