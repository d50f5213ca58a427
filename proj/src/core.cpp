#include "cylshear/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cylshear/simd/kernels.hpp"

namespace cylsh {

GridDims::GridDims(std::size_t a, std::size_t b, std::size_t c, std::size_t d) : n1(a), n2(b), n3(c), n4(d) {}

std::size_t GridDims::operator[](int axis) const {
  switch (axis) {
    case 0: return n1;
    case 1: return n2;
    case 2: return n3;
    case 3: return n4;
  }
  throw DimensionError("axis index out of range");
}

std::string GridDims::to_string() const {
  std::ostringstream os;
  os << n1 << "x" << n2 << "x" << n3 << "x" << n4;
  return os.str();
}

void validate(const GridDims& dims) {
  for (int a = 0; a < 4; ++a) {
    if (dims[a] < 2) throw DimensionError("grid " + dims.to_string() + ": every axis needs at least 2 samples");
  }
  for (int a = 0; a < 3; ++a) {
    if (dims[a] % 2 != 0) throw DimensionError("grid " + dims.to_string() + ": spatial axes must be even");
  }
}

void require_same_dims(const GridDims& a, const GridDims& b, const char* what) {
  if (!(a == b)) {
    throw DimensionError(std::string(what) + ": dimension mismatch " + a.to_string() + " vs " + b.to_string());
  }
}

Volume4::Volume4(const GridDims& dims, double fill) : dims_(dims) {
  validate(dims);
  data_.assign(dims.size(), fill);
}

Volume4::Volume4(const GridDims& dims, std::vector<double> data) : dims_(dims), data_(std::move(data)) {
  validate(dims);
  if (data_.size() != dims.size()) {
    throw DimensionError("volume data length " + std::to_string(data_.size()) + " does not match grid " +
                         dims.to_string());
  }
}

std::span<double> Volume4::frame(std::size_t t) {
  const std::size_t n = dims_.spatial_size();
  return std::span<double>(data_).subspan(t * n, n);
}

std::span<const double> Volume4::frame(std::size_t t) const {
  const std::size_t n = dims_.spatial_size();
  return std::span<const double>(data_).subspan(t * n, n);
}

bool Volume4::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

Spectrum4::Spectrum4(const GridDims& dims) : dims_(dims) {
  validate(dims);
  data_.assign(dims.size(), complex(0.0, 0.0));
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
  return simd::kernels().dot(a.data(), b.data(), a.size());
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace cylsh
