#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cylsh {

// Error categories. The CLI maps these onto exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct DimensionError : ConfigError {
  using ConfigError::ConfigError;
};
struct NumericalError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

using complex = std::complex<double>;

/// Samples per axis. Axes 1-3 are spatial, axis 4 is time.
/// Spatial extents must be even so that frequency grids are symmetric.
struct GridDims {
  std::size_t n1 = 2, n2 = 2, n3 = 2, n4 = 2;

  GridDims() = default;
  GridDims(std::size_t a, std::size_t b, std::size_t c, std::size_t d);

  std::size_t size() const { return n1 * n2 * n3 * n4; }
  std::size_t spatial_size() const { return n1 * n2 * n3; }
  std::size_t operator[](int axis) const;
  std::array<std::size_t, 4> as_array() const { return {n1, n2, n3, n4}; }

  std::size_t index(std::size_t i1, std::size_t i2, std::size_t i3, std::size_t i4) const {
    return i1 + n1 * (i2 + n2 * (i3 + n3 * i4));
  }

  std::string to_string() const;

  friend bool operator==(const GridDims&, const GridDims&) = default;
};

/// Validates the invariants of GridDims, throwing DimensionError.
void validate(const GridDims& dims);

/// Signed frequency of storage index i on an axis of length n
/// (wrap-around: i < n/2 maps to i, otherwise i - n).
inline long signed_frequency(std::size_t i, std::size_t n) {
  return i < n / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n);
}

/// Storage index of -k (mod n) for storage index i.
inline std::size_t mirror_index(std::size_t i, std::size_t n) { return i == 0 ? 0 : n - i; }

/// Real 4D sample grid, axis 1 fastest.
class Volume4 {
 public:
  Volume4() = default;
  explicit Volume4(const GridDims& dims, double fill = 0.0);
  Volume4(const GridDims& dims, std::vector<double> data);

  const GridDims& dims() const { return dims_; }
  std::size_t size() const { return data_.size(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  double& at(std::size_t i1, std::size_t i2, std::size_t i3, std::size_t i4) {
    return data_[dims_.index(i1, i2, i3, i4)];
  }
  double at(std::size_t i1, std::size_t i2, std::size_t i3, std::size_t i4) const {
    return data_[dims_.index(i1, i2, i3, i4)];
  }

  std::span<double> span() { return data_; }
  std::span<const double> span() const { return data_; }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  /// One spatial frame (time index t) as a contiguous view.
  std::span<double> frame(std::size_t t);
  std::span<const double> frame(std::size_t t) const;

  bool all_finite() const;

 private:
  GridDims dims_;
  std::vector<double> data_;
};

/// Complex spectrum on the same grid as a Volume4.
class Spectrum4 {
 public:
  Spectrum4() = default;
  explicit Spectrum4(const GridDims& dims);

  const GridDims& dims() const { return dims_; }
  std::size_t size() const { return data_.size(); }
  complex& operator[](std::size_t i) { return data_[i]; }
  const complex& operator[](std::size_t i) const { return data_[i]; }
  std::span<complex> span() { return data_; }
  std::span<const complex> span() const { return data_; }
  std::vector<complex>& data() { return data_; }
  const std::vector<complex>& data() const { return data_; }

 private:
  GridDims dims_;
  std::vector<complex> data_;
};

/// A single spatial frame n1 x n2 x n3.
struct Volume3 {
  std::size_t n1 = 0, n2 = 0, n3 = 0;
  std::vector<double> data;

  Volume3() = default;
  Volume3(std::size_t a, std::size_t b, std::size_t c, double fill = 0.0)
      : n1(a), n2(b), n3(c), data(a * b * c, fill) {}

  std::size_t size() const { return data.size(); }
  std::size_t index(std::size_t i1, std::size_t i2, std::size_t i3) const {
    return i1 + n1 * (i2 + n2 * i3);
  }
  double& at(std::size_t i1, std::size_t i2, std::size_t i3) { return data[index(i1, i2, i3)]; }
  double at(std::size_t i1, std::size_t i2, std::size_t i3) const { return data[index(i1, i2, i3)]; }
};

void require_same_dims(const GridDims& a, const GridDims& b, const char* what);

// Basic vector algebra on flat real arrays.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double max_abs(std::span<const double> a);

}  // namespace cylsh
