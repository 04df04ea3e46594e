#include "tpsolve/problem.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

namespace tpsolve {

namespace {

constexpr double kPencilConditionLimit = 1e14;

[[nodiscard]] bool pencil_probe_regular(const Matrix& mass, const Matrix& stiffness,
                                        double lambda) {
  const Matrix pencil = stiffness + lambda * mass;
  Eigen::PartialPivLU<Matrix> lu(pencil);
  const double rc = lu.rcond();
  return std::isfinite(rc) && rc > 1.0 / kPencilConditionLimit;
}

}  // namespace

PeriodicProblem make_problem_linear(const Matrix& mass, const Matrix& stiffness,
                                    std::function<Vector(double)> rhs, double period,
                                    std::uint64_t probe_seed) {
  if (mass.rows() != mass.cols() || stiffness.rows() != stiffness.cols() ||
      mass.rows() != stiffness.rows())
    throw std::invalid_argument("make_problem_linear: mass and stiffness must be square and match");
  if (period <= 0.0) throw std::invalid_argument("make_problem_linear: period must be positive");

  // lambda is scale-free: probe around ||K||/||M|| so badly scaled pairs
  // still get meaningful pencils.
  const double mass_norm = mass.norm();
  const double scale = mass_norm > 0.0 ? std::max(stiffness.norm(), 1e-30) / mass_norm : 1.0;
  std::mt19937_64 rng(probe_seed);
  std::uniform_real_distribution<double> dist(0.5, 2.0);
  bool regular = false;
  for (int probe = 0; probe < 3 && !regular; ++probe)
    regular = pencil_probe_regular(mass, stiffness, dist(rng) * scale);
  if (!regular)
    throw SingularMatrixError(
        "make_problem_linear: pencil K + lambda*M is singular for all probed lambda > 0");

  PeriodicProblem p;
  p.dim = static_cast<int>(mass.rows());
  p.period = period;
  p.mass = mass;
  p.stiffness = [stiffness](const Vector&) { return stiffness; };
  p.stiffness_jacobian = p.stiffness;
  p.rhs = std::move(rhs);
  p.linear = true;
  return p;
}

PeriodicProblem make_problem_scalar_nonlinear(double mass, std::function<double(double)> kappa,
                                              std::function<double(double)> kappa_prime,
                                              std::function<double(double)> rhs, double period) {
  if (mass < 0.0) throw std::invalid_argument("make_problem_scalar_nonlinear: mass must be >= 0");
  if (period <= 0.0)
    throw std::invalid_argument("make_problem_scalar_nonlinear: period must be positive");

  PeriodicProblem p;
  p.dim = 1;
  p.period = period;
  p.mass = Matrix::Constant(1, 1, mass);
  p.stiffness = [kappa](const Vector& x) {
    return Matrix::Constant(1, 1, kappa(std::abs(x(0))));
  };
  // d/dx [kappa(|x|) x] = kappa'(|x|) |x| + kappa(|x|), even in x.
  p.stiffness_jacobian = [kappa, kappa_prime](const Vector& x) {
    const double s = std::abs(x(0));
    return Matrix::Constant(1, 1, kappa_prime(s) * s + kappa(s));
  };
  p.rhs = [rhs](double t) { return Vector::Constant(1, rhs(t)); };
  return p;
}

TimeGrid::TimeGrid(int num_windows, int steps_per_window, double period)
    : num_windows_(num_windows), steps_per_window_(steps_per_window), period_(period) {
  if (num_windows < 1) throw std::invalid_argument("TimeGrid: num_windows must be >= 1");
  if (steps_per_window < 1) throw std::invalid_argument("TimeGrid: steps_per_window must be >= 1");
  if (!(period > 0.0)) throw std::invalid_argument("TimeGrid: period must be positive");
  coarse_dt_ = period_ / num_windows_;
  fine_dt_ = coarse_dt_ / steps_per_window_;
}

double TimeGrid::sync_point(int n) const {
  if (n < 0 || n > num_windows_) throw std::out_of_range("TimeGrid::sync_point: index out of range");
  return n * coarse_dt_;
}

double TimeGrid::fine_time(int i) const {
  if (i < 0 || i > total_fine_steps())
    throw std::out_of_range("TimeGrid::fine_time: index out of range");
  const int window = i / steps_per_window_;
  const int local = i % steps_per_window_;
  return sync_point(window) + local * fine_dt_;
}

int TimeGrid::fine_index(double t) const {
  const int i = static_cast<int>(std::lround(t / fine_dt_));
  if (i < 0 || i > total_fine_steps() || std::abs(fine_time(i) - t) > 1e-9 * period_)
    throw std::invalid_argument("TimeGrid::fine_index: time is not on the fine grid");
  return i;
}

}  // namespace tpsolve
