#include "cylshear/pyramid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "cylshear/fft.hpp"
#include "cylshear/simd/kernels.hpp"

namespace cylsh {

namespace profile {

double meyer_ramp(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * s * s * (35.0 - 84.0 * s + 70.0 * s * s - 20.0 * s * s * s);
}

double lowpass(double t) {
  const double a = std::abs(t);
  if (a <= 0.5) return 1.0;
  if (a >= 1.0) return 0.0;
  return std::cos(0.5 * std::numbers::pi * meyer_ramp(2.0 * a - 1.0));
}

}  // namespace profile

int max_scales(const GridDims& dims) {
  validate(dims);
  const std::size_t half = std::min({dims.n1, dims.n2, dims.n3}) / 2;
  int j = 1;
  // 4^(J-1) <= n_min / 2
  while (std::pow(4.0, j) <= static_cast<double>(half)) ++j;
  return j;
}

double WindowBank::outer_radius(int j) const {
  if (j >= scales) return std::numeric_limits<double>::infinity();
  return std::pow(4.0, -(scales - j));
}

double WindowBank::inner_radius(int j) const {
  if (j == 0) return 0.0;
  return 0.5 * std::pow(4.0, -(scales - j + 1));
}

WindowBank build_windows(const GridDims& dims, int scales, WindowMode mode) {
  validate(dims);
  if (scales < 1) throw ConfigError("build_windows: scale count must be >= 1");
  const int jmax = max_scales(dims);
  if (scales > jmax) {
    throw ConfigError("build_windows: " + std::to_string(scales) + " scales do not fit grid " + dims.to_string() +
                      "; maximum feasible is " + std::to_string(jmax));
  }
  WindowBank wb;
  wb.dims = dims;
  wb.scales = scales;
  wb.mode = mode;
  const int axes = mode == WindowMode::Cylindrical4D ? 4 : 3;

  // Per-axis lowpass factors phi(4^(J-j) x) for j = 0..J-1.
  std::vector<std::array<std::vector<double>, 4>> factors(static_cast<std::size_t>(scales));
  for (int j = 0; j < scales; ++j) {
    const double dilation = std::pow(4.0, scales - j);
    for (int a = 0; a < 4; ++a) {
      const std::size_t n = dims[a];
      auto& f = factors[static_cast<std::size_t>(j)][static_cast<std::size_t>(a)];
      f.assign(n, 1.0);
      if (a >= axes) continue;
      for (std::size_t i = 0; i < n; ++i) f[i] = profile::lowpass(dilation * normalized_frequency(i, n));
    }
  }

  const std::size_t total = dims.size();
  wb.windows.assign(static_cast<std::size_t>(scales) + 1, std::vector<double>(total, 0.0));
  std::vector<double> prev_sq(total, 0.0);
  for (int j = 0; j <= scales; ++j) {
    auto& w = wb.windows[static_cast<std::size_t>(j)];
    std::size_t idx = 0;
    for (std::size_t i4 = 0; i4 < dims.n4; ++i4)
      for (std::size_t i3 = 0; i3 < dims.n3; ++i3)
        for (std::size_t i2 = 0; i2 < dims.n2; ++i2)
          for (std::size_t i1 = 0; i1 < dims.n1; ++i1, ++idx) {
            double phi = 1.0;
            if (j < scales) {
              const auto& f = factors[static_cast<std::size_t>(j)];
              phi = f[0][i1] * f[1][i2] * f[2][i3] * f[3][i4];
            }
            const double sq = phi * phi;
            w[idx] = std::sqrt(std::max(sq - prev_sq[idx], 0.0));
            prev_sq[idx] = sq;
          }
  }
  return wb;
}

SubbandStack decompose(const Volume4& f, const WindowBank& wb) {
  require_same_dims(f.dims(), wb.dims, "decompose");
  const auto& k = simd::kernels();
  const std::size_t n = f.size();
  std::vector<complex> spectrum(n), work(n);
  dft_into(f.span(), f.dims(), spectrum);
  SubbandStack out;
  out.dims = f.dims();
  out.scales = wb.scales;
  for (int j = 0; j <= wb.scales; ++j) {
    k.scale_spectrum(spectrum.data(), wb.window(j).data(), work.data(), n);
    Volume4 band(f.dims());
    idft_real_into(work, f.dims(), band.span());
    out.bands.push_back(std::move(band));
  }
  return out;
}

Volume4 recompose(const SubbandStack& s, const WindowBank& wb) {
  require_same_dims(s.dims, wb.dims, "recompose");
  if (s.bands.size() != static_cast<std::size_t>(wb.scales) + 1) {
    throw DimensionError("recompose: expected " + std::to_string(wb.scales + 1) + " bands, got " +
                         std::to_string(s.bands.size()));
  }
  const auto& k = simd::kernels();
  const std::size_t n = wb.dims.size();
  std::vector<complex> acc(n, complex(0.0, 0.0)), work(n);
  for (int j = 0; j <= wb.scales; ++j) {
    const Volume4& band = s.bands[static_cast<std::size_t>(j)];
    require_same_dims(band.dims(), wb.dims, "recompose");
    dft_into(band.span(), wb.dims, work);
    k.accumulate_scaled(acc.data(), work.data(), wb.window(j).data(), n);
  }
  Volume4 out(wb.dims);
  idft_real_into(acc, wb.dims, out.span());
  return out;
}

}  // namespace cylsh
