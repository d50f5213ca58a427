#include "cylshear/simd/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace cylsh::simd {
namespace {

void scale_spectrum(const complex* in, const double* w, complex* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = complex(in[i].real() * w[i], in[i].imag() * w[i]);
  }
}

void accumulate_scaled(complex* acc, const complex* in, const double* w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    acc[i] = complex(acc[i].real() + in[i].real() * w[i], acc[i].imag() + in[i].imag() * w[i]);
  }
}

void soft_threshold(const double* in, double* out, std::size_t n, double theta) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::copysign(std::max(std::abs(in[i]) - theta, 0.0), in[i]);
  }
}

void threshold_residual(const double* in, double* out, std::size_t n, double theta) {
  for (std::size_t i = 0; i < n; ++i) {
    const double x = in[i];
    out[i] = x - std::copysign(std::max(std::abs(x) - theta, 0.0), x);
  }
}

void project_nonneg(double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = std::max(x[i], 0.0);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

std::size_t count_nonzero(const double* x, std::size_t n) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += (x[i] != 0.0);
  return c;
}

void imag_residue(const complex* z, std::size_t n, double* max_imag, double* max_real) {
  double mi = 0.0, mr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mi = std::max(mi, std::abs(z[i].imag()));
    mr = std::max(mr, std::abs(z[i].real()));
  }
  *max_imag = mi;
  *max_real = mr;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Level::Scalar,  "scalar",       scale_spectrum,
                                 accumulate_scaled, soft_threshold, threshold_residual,
                                 project_nonneg, axpy,           dot,
                                 count_nonzero,  imag_residue};
  return table;
}

}  // namespace cylsh::simd
