#pragma once

// Reference shearlet windows and filters evaluated pointwise from their
// defining profiles, without the bank builders.

#include <algorithm>
#include <cmath>
#include <vector>

#include "cylshear/dirfilters.hpp"
#include "cylshear/pyramid.hpp"

namespace oracle {

// Windows rebuilt from the profile definition, independent of build_windows.
inline std::vector<std::vector<double>> reference_windows(const cylsh::GridDims& d, int scales) {
  std::vector<std::vector<double>> w(scales + 1, std::vector<double>(d.size()));
  for (std::size_t i4 = 0; i4 < d.n4; ++i4)
    for (std::size_t i3 = 0; i3 < d.n3; ++i3)
      for (std::size_t i2 = 0; i2 < d.n2; ++i2)
        for (std::size_t i1 = 0; i1 < d.n1; ++i1) {
          const double x[4] = {2.0 * cylsh::signed_frequency(i1, d.n1) / d.n1, 2.0 * cylsh::signed_frequency(i2, d.n2) / d.n2,
                               2.0 * cylsh::signed_frequency(i3, d.n3) / d.n3, 2.0 * cylsh::signed_frequency(i4, d.n4) / d.n4};
          auto big_phi = [&](int j) {
            if (j >= scales) return 1.0;
            double p = 1.0;
            for (double xi : x) p *= cylsh::profile::lowpass(std::pow(4.0, scales - j) * xi);
            return p;
          };
          const std::size_t q = d.index(i1, i2, i3, i4);
          w[0][q] = big_phi(0);
          for (int j = 1; j <= scales; ++j) {
            const double a = big_phi(j), b = big_phi(j - 1);
            w[j][q] = std::sqrt(std::max(a * a - b * b, 0.0));
          }
        }
  return w;
}

// Directional filters from the unnormalized pyramid bumps.
inline std::vector<std::vector<double>> reference_filters(const cylsh::GridDims& d, int radius, const std::vector<cylsh::ShearIndex>& idx) {
  const std::size_t nsp = d.spatial_size();
  std::vector<std::vector<double>> raw(idx.size(), std::vector<double>(nsp));
  std::vector<double> total(nsp, 0.0);
  for (std::size_t l = 0; l < idx.size(); ++l) {
    std::size_t q = 0;
    for (std::size_t i3 = 0; i3 < d.n3; ++i3)
      for (std::size_t i2 = 0; i2 < d.n2; ++i2)
        for (std::size_t i1 = 0; i1 < d.n1; ++i1, ++q) {
          raw[l][q] = cylsh::raw_pyramid_filter(idx[l], cylsh::WedgeLayout::Odd, radius, 2.0 * cylsh::signed_frequency(i1, d.n1) / d.n1,
                                         2.0 * cylsh::signed_frequency(i2, d.n2) / d.n2,
                                         2.0 * cylsh::signed_frequency(i3, d.n3) / d.n3);
          total[q] += raw[l][q];
        }
  }
  for (auto& f : raw) {
    std::vector<double> sym(nsp);
    std::size_t q = 0;
    for (std::size_t i3 = 0; i3 < d.n3; ++i3)
      for (std::size_t i2 = 0; i2 < d.n2; ++i2)
        for (std::size_t i1 = 0; i1 < d.n1; ++i1, ++q) {
          const std::size_t r = cylsh::mirror_index(i1, d.n1) + d.n1 * (cylsh::mirror_index(i2, d.n2) + d.n2 * cylsh::mirror_index(i3, d.n3));
          sym[q] = 0.5 * (f[q] / total[q] + f[r] / total[r]);
        }
    f = sym;
  }
  return raw;
}

}  // namespace oracle
