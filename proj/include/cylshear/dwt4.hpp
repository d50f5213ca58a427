#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <vector>

#include "cylshear/core.hpp"

namespace cylsh {

/// Daubechies-2 lowpass analysis filter.
inline constexpr std::array<double, 4> kDb2Lowpass{0.4829629131445341, 0.8365163037378079, 0.2241438680420134,
                                                   -0.1294095225512604};
/// Highpass g[k] = (-1)^k h[3-k].
inline constexpr std::array<double, 4> kDb2Highpass{-0.1294095225512604, -0.2241438680420134, 0.8365163037378079,
                                                    -0.4829629131445341};

/// Periodic 4D db2 wavelet coefficients.
///
/// Flat layout: the final approximation first, then for each level from the
/// coarsest to the finest the 15 detail orientations o = 1..15, where bit a
/// of o marks a highpass along axis a+1. Each block is axis-1 fastest.
struct WaveletCoeffs {
  GridDims dims;
  int levels = 0;
  std::vector<double> data;

  /// Grid of the subbands produced at `level` (1 = finest).
  GridDims level_dims(int level) const;
  std::span<double> approximation();
  std::span<const double> approximation() const;
  /// Orientation o in 1..15 at `level` in 1..levels.
  std::span<double> detail(int level, int orientation);
  std::span<const double> detail(int level, int orientation) const;

 private:
  std::size_t offset(int level, int orientation) const;
};

/// Largest level count supported by the grid.
int dwt4_max_levels(const GridDims& dims);

WaveletCoeffs dwt4_forward(const Volume4& f, int levels);
Volume4 dwt4_inverse(const WaveletCoeffs& c);

// Flat-buffer variants (same layout as WaveletCoeffs::data).
void dwt4_forward_into(std::span<const double> f, const GridDims& dims, int levels, std::span<double> out);
void dwt4_inverse_into(std::span<const double> c, const GridDims& dims, int levels, std::span<double> out);

// Spatial-only variant: the same db2 cascade over axes 1-3 of every frame,
// leaving the time axis untouched. Layout: approximation, then levels
// coarse-to-fine with orientations o = 1..7 (bits for axes 1-3).
int dwt3_max_levels(const GridDims& dims);
void dwt3_forward_into(std::span<const double> f, const GridDims& dims, int levels, std::span<double> out);
void dwt3_inverse_into(std::span<const double> c, const GridDims& dims, int levels, std::span<double> out);

void write_wavelet(const std::filesystem::path& dir, const WaveletCoeffs& c);
WaveletCoeffs read_wavelet(const std::filesystem::path& dir);

}  // namespace cylsh
