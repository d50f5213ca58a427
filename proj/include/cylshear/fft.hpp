#pragma once

#include <span>

#include "cylshear/core.hpp"

namespace cylsh {

/// Unnormalized forward DFT over all four axes.
Spectrum4 dft(const Volume4& v);

/// Inverse DFT with the 1/N factor. Returns the real part; throws
/// NumericalError when the imaginary residue exceeds 1e-6 of the output
/// magnitude, which signals a spectrum that is not Hermitian-symmetric.
/// `max_imag`, when given, receives the residue.
Volume4 idft(const Spectrum4& s, double* max_imag = nullptr);

/// In-place transforms on raw storage; `sign` is -1 (forward) or +1 (backward,
/// unnormalized). Used by the transform kernels to avoid reallocations.
void fft_inplace(std::span<complex> data, const GridDims& dims, int sign);

/// Backward transform in place, scale by 1/N, then extract the real part into
/// `out` with the residue check of idft().
void idft_real_into(std::span<complex> data, const GridDims& dims, std::span<double> out,
                    double* max_imag = nullptr);

/// Forward transform of a real array into `out`.
void dft_into(std::span<const double> in, const GridDims& dims, std::span<complex> out);

inline constexpr double kImagResidueTolerance = 1e-6;

}  // namespace cylsh
