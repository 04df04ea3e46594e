#include "tpsolve/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tpsolve {

SolveCounter::SolveCounter(int workers) {
  if (workers < 1) throw std::invalid_argument("SolveCounter: workers must be >= 1");
  per_worker_.resize(static_cast<size_t>(workers));
}

long long SolveCounter::effective() const {
  long long best = 0;
  for (const auto& t : per_worker_) best = std::max(best, t.solves());
  return best;
}

long long SolveCounter::total() const {
  long long sum = 0;
  for (const auto& t : per_worker_) sum += t.solves();
  return sum;
}

double mixed_norm(const Eigen::Ref<const Vector>& u, const Eigen::Ref<const Vector>& v,
                  double a_tol, double r_tol) {
  if (u.size() != v.size()) throw std::invalid_argument("mixed_norm: dimension mismatch");
  return (u - v).norm() / (a_tol + r_tol * u.norm());
}

namespace {

// std::max drops NaN (comparisons are false), which would let a non-finite
// iterate report a finite error and defeat the divergence guard.
double worst_of(double a, double b) { return std::isnan(b) ? b : std::max(a, b); }

}  // namespace

double pp_error(const BlockVector& coarse_points, const BlockVector& fine, double a_tol,
                double r_tol) {
  const Eigen::Index n = coarse_points.cols();
  if (fine.cols() != n || fine.rows() != coarse_points.rows())
    throw std::invalid_argument("pp_error: shape mismatch between points and fine values");
  double worst = 0.0;
  for (Eigen::Index m = 1; m < n; ++m)
    worst = worst_of(worst, mixed_norm(coarse_points.col(m), fine.col(m - 1), a_tol, r_tol));
  worst = worst_of(worst, mixed_norm(coarse_points.col(0), fine.col(n - 1), a_tol, r_tol));
  return worst;
}

double inner_error(const BlockVector& newer, const BlockVector& older, double a_tol,
                   double r_tol) {
  if (newer.rows() != older.rows() || newer.cols() != older.cols())
    throw std::invalid_argument("inner_error: shape mismatch between iterates");
  double worst = 0.0;
  for (Eigen::Index m = 0; m < newer.cols(); ++m)
    worst = worst_of(worst, mixed_norm(newer.col(m), older.col(m), a_tol, r_tol));
  return worst;
}

}  // namespace tpsolve
