#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "cylshear/core.hpp"
#include "cylshear/dirfilters.hpp"
#include "cylshear/pyramid.hpp"

namespace cylsh {

/// Precomputed window and directional filter banks for one grid.
struct ShearletSystem {
  GridDims dims;
  ShearConfig config;
  WindowMode mode = WindowMode::Cylindrical4D;
  WindowBank windows;
  DirFilterBank filters;
  std::vector<ShearIndex> labels;  // detail bands in canonical order

  std::size_t band_count() const { return labels.size() + 1; }
  std::size_t coefficient_count() const { return band_count() * dims.size(); }
};

/// Largest valid J <= 3 with radii 1, 2, 2 (coarsest first).
ShearConfig default_shear_config(const GridDims& dims);

ShearletSystem build_system(const GridDims& dims, const ShearConfig& cfg,
                            WindowMode mode = WindowMode::Cylindrical4D);

/// Coarse band followed by the detail bands, each a full-grid real array,
/// stored contiguously in one buffer.
class CoeffSet {
 public:
  CoeffSet() = default;
  explicit CoeffSet(const ShearletSystem& sys);
  CoeffSet(const GridDims& dims, std::vector<ShearIndex> labels, std::vector<double> data);

  const GridDims& dims() const { return dims_; }
  const std::vector<ShearIndex>& labels() const { return labels_; }
  std::size_t band_count() const { return labels_.size() + 1; }
  std::size_t band_size() const { return dims_.size(); }

  std::span<double> band(std::size_t b);
  std::span<const double> band(std::size_t b) const;
  std::span<double> coarse() { return band(0); }
  std::span<const double> coarse() const { return band(0); }
  std::span<double> detail(const ShearIndex& idx);
  std::span<const double> detail(const ShearIndex& idx) const;
  Volume4 band_volume(std::size_t b) const;

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t find(const ShearIndex& idx) const;

  GridDims dims_;
  std::vector<ShearIndex> labels_;
  std::vector<double> data_;
};

/// Analysis: coarse = f * W_0, detail(j,d,l) = f * W_j V_{j,l}^{(d)}.
CoeffSet forward(const Volume4& f, const ShearletSystem& sys);
/// Left inverse: sum the detail bands of each scale, then recompose.
Volume4 inverse(const CoeffSet& c, const ShearletSystem& sys);
/// Exact adjoint of forward().
Volume4 adjoint(const CoeffSet& u, const ShearletSystem& sys);

// Flat-buffer variants used by the solver; `coeffs` has coefficient_count()
// entries in CoeffSet order.
/// Computes the forward bands one at a time and hands each to `visit`
/// (band index in CoeffSet order, band samples). Calls may come from worker
/// threads; each band is visited exactly once.
using BandVisitor = std::function<void(std::size_t, std::span<const double>)>;
void forward_visit(std::span<const double> f, const ShearletSystem& sys, const BandVisitor& visit);

void forward_into(std::span<const double> f, const ShearletSystem& sys, std::span<double> coeffs);
void adjoint_into(std::span<const double> coeffs, const ShearletSystem& sys, std::span<double> out);
void inverse_into(std::span<const double> coeffs, const ShearletSystem& sys, std::span<double> out);

/// The Fourier multiplier of adjoint(forward(.)):
/// W_0^2 + sum_j W_j^2 sum_{d,l} V^2, on the full grid.
std::vector<double> gram_multiplier(const ShearletSystem& sys);

/// (min, max) of gram_multiplier(): the exact frame bounds.
std::pair<double, double> frame_bounds(const ShearletSystem& sys);

/// One raw volume per band plus manifest.json listing (j, d, l1, l2) -> file.
void write_coefficients(const std::filesystem::path& dir, const CoeffSet& c, const ShearletSystem& sys);
CoeffSet read_coefficients(const std::filesystem::path& dir, const ShearletSystem& sys);
/// Rebuilds the system recorded in a coefficient manifest.
ShearletSystem read_coefficient_system(const std::filesystem::path& dir);

}  // namespace cylsh
