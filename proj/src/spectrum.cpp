#include "tpsolve/spectrum.hpp"

#include <numbers>
#include <stdexcept>

namespace tpsolve {

Spectrum build_spectrum(int num_samples, double period) {
  if (num_samples < 1) {
    throw std::invalid_argument("build_spectrum: num_samples must be >= 1");
  }
  if (!(period > 0.0)) {
    throw std::invalid_argument("build_spectrum: period must be positive");
  }
  const long n = num_samples;
  const long half = n / 2;
  const long lo = -half + (n % 2 == 0 ? 1 : 0);

  Spectrum spectrum;
  spectrum.p.reserve(n);
  spectrum.omega.reserve(n);
  spectrum.fft_bin.reserve(n);
  const double base = 2.0 * std::numbers::pi / period;
  for (long p = lo; p <= half; ++p) {
    spectrum.p.push_back(p);
    spectrum.omega.push_back(base * static_cast<double>(p));
    spectrum.fft_bin.push_back(static_cast<int>(((p % n) + n) % n));
  }
  return spectrum;
}

}  // namespace tpsolve
