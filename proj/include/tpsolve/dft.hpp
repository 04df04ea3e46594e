#pragma once

#include "tpsolve/spectrum.hpp"
#include "tpsolve/types.hpp"

namespace tpsolve {

/// Unitary DFT of a block trajectory.  `samples` is d x N with column n the
/// state at sample n; the result is d x N with column j the complex harmonic
/// coefficient for integer frequency `spectrum.p[j]`, scaled by 1/sqrt(N).
ComplexBlockVector dft_forward(const BlockVector& samples,
                               const Spectrum& spectrum);

/// Inverse of dft_forward (complex result, same 1/sqrt(N) scaling).
ComplexBlockVector dft_inverse(const ComplexBlockVector& coefficients,
                               const Spectrum& spectrum);

/// Inverse transform of coefficients known to represent a real trajectory.
/// The imaginary part is dropped; its largest magnitude is reported through
/// `imag_residue` when non-null so callers can assert it stayed at round-off.
BlockVector dft_inverse_real(const ComplexBlockVector& coefficients,
                             const Spectrum& spectrum,
                             double* imag_residue = nullptr);

}  // namespace tpsolve
