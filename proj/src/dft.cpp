#include "tpsolve/dft.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <stdexcept>

namespace tpsolve {
namespace {

// FFTW planning is not thread-safe; execution of a private plan is.
std::mutex& planner_mutex() {
  static std::mutex mutex;
  return mutex;
}

// In-place length-N transform of every row of the column-major d x N work
// matrix (stride d between time samples, distance 1 between rows).
void run_fft(ComplexBlockVector& work, int sign) {
  const int dim = static_cast<int>(work.rows());
  const int samples = static_cast<int>(work.cols());
  auto* data = reinterpret_cast<fftw_complex*>(work.data());

  fftw_plan plan = nullptr;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_many_dft(1, &samples, dim, data, nullptr, dim, 1, data,
                              nullptr, dim, 1, sign,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  if (plan == nullptr) {
    throw SolverError("dft: fftw plan creation failed");
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
}

void check_shape(long cols, const Spectrum& spectrum, const char* where) {
  if (cols != spectrum.size()) {
    throw std::invalid_argument(std::string(where) +
                                ": sample count does not match spectrum size");
  }
}

}  // namespace

ComplexBlockVector dft_forward(const BlockVector& samples,
                               const Spectrum& spectrum) {
  check_shape(samples.cols(), spectrum, "dft_forward");
  ComplexBlockVector work = samples.cast<std::complex<double>>();
  run_fft(work, FFTW_FORWARD);

  const double scale = 1.0 / std::sqrt(static_cast<double>(samples.cols()));
  ComplexBlockVector coefficients(samples.rows(), samples.cols());
  for (int j = 0; j < spectrum.size(); ++j) {
    coefficients.col(j) = work.col(spectrum.fft_bin[j]) * scale;
  }
  return coefficients;
}

ComplexBlockVector dft_inverse(const ComplexBlockVector& coefficients,
                               const Spectrum& spectrum) {
  check_shape(coefficients.cols(), spectrum, "dft_inverse");
  ComplexBlockVector work(coefficients.rows(), coefficients.cols());
  for (int j = 0; j < spectrum.size(); ++j) {
    work.col(spectrum.fft_bin[j]) = coefficients.col(j);
  }
  run_fft(work, FFTW_BACKWARD);
  work *= 1.0 / std::sqrt(static_cast<double>(coefficients.cols()));
  return work;
}

BlockVector dft_inverse_real(const ComplexBlockVector& coefficients,
                             const Spectrum& spectrum, double* imag_residue) {
  const ComplexBlockVector full = dft_inverse(coefficients, spectrum);
  if (imag_residue != nullptr) {
    *imag_residue = full.imag().cwiseAbs().maxCoeff();
  }
  return full.real();
}

}  // namespace tpsolve
