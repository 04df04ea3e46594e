#pragma once

#include <vector>

namespace tpsolve {

/// Harmonic index set used by the multi-harmonic transforms.
///
/// For N samples the integer indices run
///   p = -floor(N/2) + delta, ..., floor(N/2),   delta = 1 iff N even,
/// i.e. N consecutive integers centred at zero with the Nyquist index kept
/// positive for even N.  `omega[j] = 2 pi p[j] / period` and `fft_bin[j]`
/// maps slot j onto the standard DFT bin `((p[j] % N) + N) % N`.
struct Spectrum {
  std::vector<long> p;
  std::vector<double> omega;
  std::vector<int> fft_bin;

  int size() const { return static_cast<int>(p.size()); }
};

Spectrum build_spectrum(int num_samples, double period);

}  // namespace tpsolve
