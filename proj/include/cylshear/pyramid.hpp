#pragma once

#include <vector>

#include "cylshear/core.hpp"

namespace cylsh {

/// Which axes the scale windows act on. Spatial3D ignores time, which turns
/// the transform into an independent 3D transform of every frame.
enum class WindowMode { Cylindrical4D, Spatial3D };

namespace profile {
/// Meyer auxiliary polynomial: 0 below 0, 1 above 1, nu(s) + nu(1-s) = 1.
double meyer_ramp(double s);
/// Lowpass profile: 1 on [-1/2, 1/2], 0 outside (-1, 1), squared-cosine
/// transition in between.
double lowpass(double t);
}  // namespace profile

/// Frequency windows W_0..W_J on the full grid with sum_j W_j^2 == 1.
/// W_0 is the lowpass band, W_J the finest corona. Consecutive coronae are
/// a factor 4 apart in the max-norm radius.
struct WindowBank {
  GridDims dims;
  int scales = 0;  // J
  WindowMode mode = WindowMode::Cylindrical4D;
  std::vector<std::vector<double>> windows;  // J+1 arrays of dims.size()

  const std::vector<double>& window(int j) const { return windows.at(static_cast<std::size_t>(j)); }

  /// Radius (normalized max-norm, Nyquist = 1) below which W_j vanishes, and
  /// at or above which it vanishes; W_0's inner radius is 0.
  double inner_radius(int j) const;
  double outer_radius(int j) const;
};

/// Largest J for which the coarsest detail corona still reaches one sample.
int max_scales(const GridDims& dims);

WindowBank build_windows(const GridDims& dims, int scales, WindowMode mode = WindowMode::Cylindrical4D);

/// Normalized signed frequency 2k/n in [-1, 1) for storage index i.
inline double normalized_frequency(std::size_t i, std::size_t n) {
  return 2.0 * static_cast<double>(signed_frequency(i, n)) / static_cast<double>(n);
}

struct SubbandStack {
  GridDims dims;
  int scales = 0;
  std::vector<Volume4> bands;  // f_0 .. f_J
};

SubbandStack decompose(const Volume4& f, const WindowBank& wb);
Volume4 recompose(const SubbandStack& s, const WindowBank& wb);

}  // namespace cylsh
