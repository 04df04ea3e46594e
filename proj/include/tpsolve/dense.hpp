#pragma once

#include "tpsolve/types.hpp"

namespace tpsolve {

/// Fraction of the largest |U_ii| below which an LU pivot counts as zero.
inline constexpr double kSingularPivotRatio = 1e-14;

/// Throws SingularMatrixError when the factorization carries a (near-)zero
/// or non-finite pivot.  The check is relative to the largest pivot, so it is
/// invariant under uniform scaling of the matrix.
void check_pivots(const Eigen::PartialPivLU<Matrix>& lu, const char* context,
                  int frequency_index = -1);
void check_pivots(const Eigen::PartialPivLU<ComplexMatrix>& lu,
                  const char* context, int frequency_index = -1);

/// One-shot LU solves with the pivot check applied.
Vector solve_dense(const Matrix& a, const Vector& b,
                   const char* context = "solve_dense");
ComplexVector solve_dense(const ComplexMatrix& a, const ComplexVector& b,
                          const char* context = "solve_dense",
                          int frequency_index = -1);

}  // namespace tpsolve
