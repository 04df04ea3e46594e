#pragma once

// Independent reference implementations the tests compare the library
// against.  Everything here is deliberately naive (quadratic transforms,
// dense factorizations of structured systems, bisection instead of Newton,
// finite differences instead of analytic derivatives) so that agreement with
// the optimized paths is meaningful.

#include "tpsolve/block_cyclic.hpp"
#include "tpsolve/problem.hpp"
#include "tpsolve/spectrum.hpp"
#include "tpsolve/types.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <stdexcept>

namespace oracle {

using tpsolve::BlockCyclicSystem;
using tpsolve::BlockVector;
using tpsolve::ComplexBlockVector;
using tpsolve::ComplexMatrix;
using tpsolve::Matrix;
using tpsolve::PeriodicProblem;
using tpsolve::Spectrum;
using tpsolve::Vector;

// Unitary DFT matrix in the spectrum's slot order:
// F(j, n) = exp(-2 pi i p_j n / N) / sqrt(N).
inline ComplexMatrix dft_matrix(const Spectrum& spectrum) {
  const int n = spectrum.size();
  ComplexMatrix f(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const double angle = -2.0 * M_PI * static_cast<double>(spectrum.p[static_cast<size_t>(j)]) *
                           static_cast<double>(k) / static_cast<double>(n);
      f(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(n)), angle);
    }
  }
  return f;
}

// O(N^2) forward transform straight from the definition.
inline ComplexBlockVector naive_dft_forward(const BlockVector& samples,
                                            const Spectrum& spectrum) {
  const int n = spectrum.size();
  const ComplexMatrix f = dft_matrix(spectrum);
  ComplexBlockVector out = ComplexBlockVector::Zero(samples.rows(), n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      out.col(j) += f(j, k) * samples.col(k);
    }
  }
  return out;
}

// O(N^2) inverse transform (conjugate-transpose of the forward matrix).
inline ComplexBlockVector naive_dft_inverse(const ComplexBlockVector& coeffs,
                                            const Spectrum& spectrum) {
  const int n = spectrum.size();
  const ComplexMatrix f = dft_matrix(spectrum);
  ComplexBlockVector out = ComplexBlockVector::Zero(coeffs.rows(), n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      out.col(k) += std::conj(f(j, k)) * coeffs.col(j);
    }
  }
  return out;
}

// The block-cyclic operator written out as one dense (N d) x (N d) matrix.
inline Matrix materialize_block_cyclic(const BlockCyclicSystem& system) {
  const int n = system.spectrum.size();
  const auto d = system.h_diag.rows();
  Matrix full = Matrix::Zero(n * d, n * d);
  for (int m = 0; m < n; ++m) {
    const int prev = (m + n - 1) % n;
    full.block(m * d, m * d, d, d) = system.h_diag;
    full.block(m * d, prev * d, d, d) -= system.coupling;
  }
  return full;
}

// Dense solve of the materialized system via full-pivot LU.
inline BlockVector dense_block_cyclic_solve(const BlockCyclicSystem& system,
                                            const BlockVector& rhs) {
  const int n = system.spectrum.size();
  const auto d = system.h_diag.rows();
  const Matrix full = materialize_block_cyclic(system);
  Vector stacked(n * d);
  for (int m = 0; m < n; ++m) {
    stacked.segment(m * d, d) = rhs.col(m);
  }
  const Vector solved = Eigen::FullPivLU<Matrix>(full).solve(stacked);
  BlockVector out(d, n);
  for (int m = 0; m < n; ++m) {
    out.col(m) = solved.segment(m * d, d);
  }
  return out;
}

// Central finite difference of u -> K(u) u, column by column.
inline Matrix fd_product_jacobian(const PeriodicProblem& problem,
                                  const Vector& u, double h = 1e-6) {
  Matrix jac(problem.dim, problem.dim);
  for (int i = 0; i < problem.dim; ++i) {
    Vector up = u;
    Vector down = u;
    up[i] += h;
    down[i] -= h;
    const Vector fp = problem.stiffness(up) * up;
    const Vector fm = problem.stiffness(down) * down;
    jac.col(i) = (fp - fm) / (2.0 * h);
  }
  return jac;
}

// The saturating coefficient written as plain branch formulas (no shared
// code with the library's piecewise-cubic evaluator).
inline double saturating_kappa(double s) {
  if (s < 0.1) {
    return -5.0 * s * s * s + 1.5 * s * s + 1.0;
  }
  if (s < 0.2) {
    const double x = s - 0.1;
    return -5.0 * x * x * x + 0.15 * x + 1.01;
  }
  return 1.02;
}

inline double saturating_kappa_prime(double s) {
  if (s < 0.1) {
    return -15.0 * s * s + 3.0 * s;
  }
  if (s < 0.2) {
    const double x = s - 0.1;
    return -15.0 * x * x + 0.15;
  }
  return 0.0;
}

// One implicit Euler step of m u' + kappa(|u|) u = j(t) solved by bisection.
// g(u) = (m/h) u + kappa(|u|) u - rhs is strictly increasing (the product
// derivative of the saturating curve stays >= 1), so the root is unique and
// bracketing cannot fail.
inline double scalar_euler_step_bisect(
    double mass, double u_prev, double t_prev, double h,
    const std::function<double(double)>& forcing) {
  const double rhs = (mass / h) * u_prev + forcing(t_prev + h);
  const auto g = [&](double u) {
    return (mass / h) * u + saturating_kappa(std::abs(u)) * u - rhs;
  };
  double lo = -1.0;
  double hi = 1.0;
  for (int i = 0; i < 200 && (g(lo) > 0.0 || g(hi) < 0.0); ++i) {
    lo *= 2.0;
    hi *= 2.0;
  }
  if (g(lo) > 0.0 || g(hi) < 0.0) {
    throw std::runtime_error("bisection bracket failed");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) <= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double rl_forcing(double t) {
  return 1e-3 * std::sin(2.0 * M_PI * t / 0.02);
}

// Deterministic dense matrix with entries in [-1, 1).
inline Matrix random_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      m(i, j) = dist(rng);
    }
  }
  return m;
}

// Random well-conditioned block-cyclic instance: the diagonal block is
// shifted to dominate the coupling, so every frequency block stays regular.
inline BlockCyclicSystem random_block_cyclic(std::mt19937_64& rng, int n,
                                             int d, double dt, double period) {
  const Matrix coupling = random_matrix(rng, d, d);
  Matrix h_diag = random_matrix(rng, d, d);
  h_diag += (h_diag.norm() + coupling.norm() + 1.0) * Matrix::Identity(d, d);
  return tpsolve::make_block_cyclic_system(std::move(h_diag), coupling, dt,
                                           period);
}

}  // namespace oracle
