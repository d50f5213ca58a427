#pragma once

#include <compare>
#include <span>
#include <string>
#include <vector>

#include "cylshear/core.hpp"

namespace cylsh {

/// Layout of wedge centers along each slope axis.
///  Odd:  2L+1 wedges centered at l/L, l = -L..L.
///  Even: 2L wedges centered at (l + 1/2)/L, l = -L..L-1.
enum class WedgeLayout { Odd, Even };

/// (scale, pyramid, shear) label of one directional filter.
/// Scales run 1..J (J finest), pyramids 1..3.
struct ShearIndex {
  int j = 1;
  int d = 1;
  int l1 = 0;
  int l2 = 0;

  auto operator<=>(const ShearIndex&) const = default;
  std::string to_string() const;
};

struct ShearConfig {
  int scales = 2;                  // J
  std::vector<int> shear_radii{1, 2};  // L_1 (coarsest) .. L_J (finest)
  WedgeLayout layout = WedgeLayout::Odd;
};

/// Directions per pyramid, finest scale first.
std::vector<int> directions_per_scale(const ShearConfig& cfg);

/// Shear integers admitted along one slope axis.
std::vector<int> shear_values(WedgeLayout layout, int radius);
double wedge_center(WedgeLayout layout, int radius, int l);
/// Squared-cosine bump of half-width h centered at c; neighbours at spacing
/// h sum to one.
double wedge_bump(double u, double center, double halfwidth);

/// Directional filters V_{j,l}^{(d)}, one spatial array (n1*n2*n3) each;
/// they are constant along the time axis. For every scale and every
/// frequency the filters of that scale sum to one.
class DirFilterBank {
 public:
  DirFilterBank() = default;

  const GridDims& dims() const { return dims_; }
  const ShearConfig& config() const { return cfg_; }
  int scales() const { return cfg_.scales; }

  std::size_t filter_count(int j) const { return indices_.at(static_cast<std::size_t>(j - 1)).size(); }
  const std::vector<ShearIndex>& indices(int j) const { return indices_.at(static_cast<std::size_t>(j - 1)); }
  std::span<const double> filter(int j, std::size_t local) const {
    return filters_.at(static_cast<std::size_t>(j - 1)).at(local);
  }
  /// Position of `idx` within indices(idx.j); throws if absent.
  std::size_t locate(const ShearIndex& idx) const;

  friend DirFilterBank build_filters(const GridDims& dims, const ShearConfig& cfg);

 private:
  GridDims dims_;
  ShearConfig cfg_;
  std::vector<std::vector<ShearIndex>> indices_;
  std::vector<std::vector<std::vector<double>>> filters_;
};

DirFilterBank build_filters(const GridDims& dims, const ShearConfig& cfg);

/// Filter values before cross-pyramid renormalization, evaluated at a
/// normalized spatial frequency. Exposed for locality checks.
double raw_pyramid_filter(const ShearIndex& idx, WedgeLayout layout, int radius, double x1, double x2, double x3);

/// Validates a ShearConfig against the grid (angular resolution per scale).
void validate(const ShearConfig& cfg, const GridDims& dims);

}  // namespace cylsh
