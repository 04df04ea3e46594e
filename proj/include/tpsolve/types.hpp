#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace tpsolve {

/// Column n holds the state vector attached to the n-th time point of a
/// periodic grid, so a d-dimensional problem over N points is a d x N matrix.
using BlockVector = Eigen::MatrixXd;
using ComplexBlockVector = Eigen::MatrixXcd;

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Base class for all failures raised by the solver library.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// A matrix (or matrix pencil) required to be regular was found singular.
/// `frequency_index` is >= 0 when the offender is one frequency block of a
/// block-cyclic system.
class SingularMatrixError : public SolverError {
 public:
  explicit SingularMatrixError(const std::string& what, int frequency_index = -1)
      : SolverError(what), frequency_index_(frequency_index) {}
  [[nodiscard]] int frequency_index() const { return frequency_index_; }

 private:
  int frequency_index_;
};

/// A single implicit time step failed to reach its residual tolerance.
class StepSolveError : public SolverError {
 public:
  StepSolveError(const std::string& what, double last_residual)
      : SolverError(what), last_residual_(last_residual) {}
  [[nodiscard]] double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

}  // namespace tpsolve
