#include "cylshear/dirfilters.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "cylshear/pyramid.hpp"

namespace cylsh {

namespace {

// The two slope axes of pyramid d (1-based), in increasing order.
constexpr std::array<std::array<int, 2>, 3> kSlopeAxes{{{1, 2}, {0, 2}, {0, 1}}};

int per_axis_count(WedgeLayout layout, int radius) { return layout == WedgeLayout::Odd ? 2 * radius + 1 : 2 * radius; }

}  // namespace

std::string ShearIndex::to_string() const {
  return "j" + std::to_string(j) + "_d" + std::to_string(d) + "_l" + std::to_string(l1) + "_" + std::to_string(l2);
}

std::vector<int> directions_per_scale(const ShearConfig& cfg) {
  std::vector<int> out;
  for (int j = cfg.scales; j >= 1; --j) {
    const int m = per_axis_count(cfg.layout, cfg.shear_radii.at(static_cast<std::size_t>(j - 1)));
    out.push_back(m * m);
  }
  return out;
}

std::vector<int> shear_values(WedgeLayout layout, int radius) {
  std::vector<int> out;
  const int m = per_axis_count(layout, radius);
  for (int i = 0; i < m; ++i) out.push_back(-radius + i);
  return out;
}

double wedge_center(WedgeLayout layout, int radius, int l) {
  const double r = static_cast<double>(radius);
  return layout == WedgeLayout::Odd ? static_cast<double>(l) / r : (static_cast<double>(l) + 0.5) / r;
}

double wedge_bump(double u, double center, double halfwidth) {
  const double t = std::abs(u - center) / halfwidth;
  if (t >= 1.0) return 0.0;
  const double c = std::cos(0.5 * std::numbers::pi * profile::meyer_ramp(t));
  return c * c;
}

double raw_pyramid_filter(const ShearIndex& idx, WedgeLayout layout, int radius, double x1, double x2, double x3) {
  const std::array<double, 3> x{x1, x2, x3};
  double ua = 0.0, ub = 0.0;
  if (x1 != 0.0 || x2 != 0.0 || x3 != 0.0) {
    const double xd = x[static_cast<std::size_t>(idx.d - 1)];
    if (xd == 0.0) return 0.0;
    const auto& ax = kSlopeAxes[static_cast<std::size_t>(idx.d - 1)];
    ua = x[static_cast<std::size_t>(ax[0])] / xd;
    ub = x[static_cast<std::size_t>(ax[1])] / xd;
  }
  const double h = 1.0 / static_cast<double>(radius);
  return wedge_bump(ua, wedge_center(layout, radius, idx.l1), h) *
         wedge_bump(ub, wedge_center(layout, radius, idx.l2), h);
}

void validate(const ShearConfig& cfg, const GridDims& dims) {
  validate(dims);
  if (cfg.scales < 1) throw ConfigError("shear config: scale count must be >= 1");
  if (cfg.shear_radii.size() != static_cast<std::size_t>(cfg.scales)) {
    throw ConfigError("shear config: expected " + std::to_string(cfg.scales) + " shear radii, got " +
                      std::to_string(cfg.shear_radii.size()));
  }
  const double half = static_cast<double>(std::min({dims.n1, dims.n2, dims.n3})) / 2.0;
  for (int j = 1; j <= cfg.scales; ++j) {
    const int radius = cfg.shear_radii[static_cast<std::size_t>(j - 1)];
    if (radius < 1) throw ConfigError("shear config: shear radius must be >= 1");
    // Outer corona radius in samples times the wedge width in slope units.
    const double outer = half * std::pow(4.0, -(cfg.scales - j));
    const double lines = outer / static_cast<double>(radius);
    if (lines < 2.0) {
      throw ConfigError("shear config: radius " + std::to_string(radius) + " at scale " + std::to_string(j) +
                        " leaves " + std::to_string(lines) + " grid lines per wedge on " + dims.to_string() +
                        " (need >= 2)");
    }
  }
}

std::size_t DirFilterBank::locate(const ShearIndex& idx) const {
  if (idx.j < 1 || idx.j > cfg_.scales) throw ConfigError("shear index out of range: " + idx.to_string());
  const auto& list = indices_[static_cast<std::size_t>(idx.j - 1)];
  auto it = std::lower_bound(list.begin(), list.end(), idx);
  if (it == list.end() || !(*it == idx)) throw ConfigError("shear index not in system: " + idx.to_string());
  return static_cast<std::size_t>(it - list.begin());
}

DirFilterBank build_filters(const GridDims& dims, const ShearConfig& cfg) {
  validate(cfg, dims);
  DirFilterBank bank;
  bank.dims_ = dims;
  bank.cfg_ = cfg;
  const std::size_t n1 = dims.n1, n2 = dims.n2, n3 = dims.n3;
  const std::size_t nsp = dims.spatial_size();

  std::vector<double> x1(n1), x2(n2), x3(n3);
  for (std::size_t i = 0; i < n1; ++i) x1[i] = normalized_frequency(i, n1);
  for (std::size_t i = 0; i < n2; ++i) x2[i] = normalized_frequency(i, n2);
  for (std::size_t i = 0; i < n3; ++i) x3[i] = normalized_frequency(i, n3);

  for (int j = 1; j <= cfg.scales; ++j) {
    const int radius = cfg.shear_radii[static_cast<std::size_t>(j - 1)];
    const auto shears = shear_values(cfg.layout, radius);
    const std::size_t m = shears.size();
    const double h = 1.0 / static_cast<double>(radius);
    std::vector<double> centers(m);
    for (std::size_t i = 0; i < m; ++i) centers[i] = wedge_center(cfg.layout, radius, shears[i]);

    std::vector<ShearIndex> idx;
    for (int d = 1; d <= 3; ++d)
      for (int a : shears)
        for (int b : shears) idx.push_back({j, d, a, b});
    std::vector<std::vector<double>> filters(idx.size(), std::vector<double>(nsp, 0.0));
    std::vector<double> total(nsp, 0.0);

    std::vector<double> ba(m), bb(m);
    std::size_t p = 0;
    for (std::size_t i3 = 0; i3 < n3; ++i3)
      for (std::size_t i2 = 0; i2 < n2; ++i2)
        for (std::size_t i1 = 0; i1 < n1; ++i1, ++p) {
          const std::array<double, 3> x{x1[i1], x2[i2], x3[i3]};
          const bool origin = x[0] == 0.0 && x[1] == 0.0 && x[2] == 0.0;
          double sum = 0.0;
          for (int d = 1; d <= 3; ++d) {
            double ua = 0.0, ub = 0.0;
            if (!origin) {
              const double xd = x[static_cast<std::size_t>(d - 1)];
              if (xd == 0.0) continue;
              const auto& ax = kSlopeAxes[static_cast<std::size_t>(d - 1)];
              ua = x[static_cast<std::size_t>(ax[0])] / xd;
              ub = x[static_cast<std::size_t>(ax[1])] / xd;
              if (std::abs(ua) >= 1.0 + h || std::abs(ub) >= 1.0 + h) continue;
            }
            for (std::size_t i = 0; i < m; ++i) {
              ba[i] = wedge_bump(ua, centers[i], h);
              bb[i] = wedge_bump(ub, centers[i], h);
            }
            const std::size_t base = static_cast<std::size_t>(d - 1) * m * m;
            for (std::size_t a = 0; a < m; ++a) {
              if (ba[a] == 0.0) continue;
              for (std::size_t b = 0; b < m; ++b) {
                if (bb[b] == 0.0) continue;
                const double v = ba[a] * bb[b];
                filters[base + a * m + b][p] = v;
                sum += v;
              }
            }
          }
          total[p] = sum;
        }

    for (std::size_t q = 0; q < nsp; ++q) {
      if (!(total[q] > 0.0)) throw NumericalError("build_filters: uncovered frequency in scale " + std::to_string(j));
    }
    for (auto& f : filters) {
      for (std::size_t q = 0; q < nsp; ++q) f[q] /= total[q];
    }
    // Symmetrize across k -> -k so every filter yields real outputs; only
    // Nyquist planes change (elsewhere the slopes are negation-invariant).
    for (auto& f : filters) {
      std::vector<double> mirrored(nsp);
      std::size_t q = 0;
      for (std::size_t i3 = 0; i3 < n3; ++i3)
        for (std::size_t i2 = 0; i2 < n2; ++i2)
          for (std::size_t i1 = 0; i1 < n1; ++i1, ++q) {
            const std::size_t r = mirror_index(i1, n1) + n1 * (mirror_index(i2, n2) + n2 * mirror_index(i3, n3));
            mirrored[q] = 0.5 * (f[q] + f[r]);
          }
      f = std::move(mirrored);
    }

    bank.indices_.push_back(std::move(idx));
    bank.filters_.push_back(std::move(filters));
  }
  return bank;
}

}  // namespace cylsh
