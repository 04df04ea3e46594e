#include "tpsolve/dense.hpp"

#include <cmath>
#include <string>

namespace tpsolve {
namespace {

template <typename Factorization>
void check_pivots_impl(const Factorization& lu, const char* context,
                       int frequency_index) {
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs().eval();
  const double largest = pivots.maxCoeff();
  const double smallest = pivots.minCoeff();
  if (!std::isfinite(largest) || !(smallest > kSingularPivotRatio * largest)) {
    std::string what = std::string(context) + ": matrix is numerically singular";
    if (frequency_index >= 0) {
      what += " (frequency block " + std::to_string(frequency_index) + ")";
    }
    throw SingularMatrixError(what, frequency_index);
  }
}

}  // namespace

void check_pivots(const Eigen::PartialPivLU<Matrix>& lu, const char* context,
                  int frequency_index) {
  check_pivots_impl(lu, context, frequency_index);
}

void check_pivots(const Eigen::PartialPivLU<ComplexMatrix>& lu,
                  const char* context, int frequency_index) {
  check_pivots_impl(lu, context, frequency_index);
}

Vector solve_dense(const Matrix& a, const Vector& b, const char* context) {
  Eigen::PartialPivLU<Matrix> lu(a);
  check_pivots(lu, context);
  return lu.solve(b);
}

ComplexVector solve_dense(const ComplexMatrix& a, const ComplexVector& b,
                          const char* context, int frequency_index) {
  Eigen::PartialPivLU<ComplexMatrix> lu(a);
  check_pivots(lu, context, frequency_index);
  return lu.solve(b);
}

}  // namespace tpsolve
