// Compiled with -mavx2 (but not -mfma) so that products and sums round
// exactly like the scalar reference.
#include "cylshear/simd/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace cylsh::simd {
namespace {

// (w0, w0, w1, w1) from two consecutive weights.
inline __m256d widen_pair(const double* w) {
  const __m128d pair = _mm_loadu_pd(w);
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(pair), 0x50);
}

void scale_spectrum(const complex* in, const double* w, complex* out, std::size_t n) {
  const double* src = reinterpret_cast<const double*>(in);
  double* dst = reinterpret_cast<double*>(out);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d z = _mm256_loadu_pd(src + 2 * i);
    _mm256_storeu_pd(dst + 2 * i, _mm256_mul_pd(z, widen_pair(w + i)));
  }
  for (; i < n; ++i) out[i] = complex(in[i].real() * w[i], in[i].imag() * w[i]);
}

void accumulate_scaled(complex* acc, const complex* in, const double* w, std::size_t n) {
  const double* src = reinterpret_cast<const double*>(in);
  double* dst = reinterpret_cast<double*>(acc);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d z = _mm256_loadu_pd(src + 2 * i);
    const __m256d a = _mm256_loadu_pd(dst + 2 * i);
    _mm256_storeu_pd(dst + 2 * i, _mm256_add_pd(a, _mm256_mul_pd(z, widen_pair(w + i))));
  }
  for (; i < n; ++i) {
    acc[i] = complex(acc[i].real() + in[i].real() * w[i], acc[i].imag() + in[i].imag() * w[i]);
  }
}

inline __m256d soft4(__m256d x, __m256d theta, __m256d sign_mask) {
  const __m256d mag = _mm256_andnot_pd(sign_mask, x);
  const __m256d shrunk = _mm256_max_pd(_mm256_setzero_pd(), _mm256_sub_pd(mag, theta));
  return _mm256_or_pd(shrunk, _mm256_and_pd(sign_mask, x));
}

inline double soft1(double x, double theta) {
  return std::copysign(std::max(std::abs(x) - theta, 0.0), x);
}

void soft_threshold(const double* in, double* out, std::size_t n, double theta) {
  const __m256d t = _mm256_set1_pd(theta);
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, soft4(_mm256_loadu_pd(in + i), t, sign));
  }
  for (; i < n; ++i) out[i] = soft1(in[i], theta);
}

void threshold_residual(const double* in, double* out, std::size_t n, double theta) {
  const __m256d t = _mm256_set1_pd(theta);
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(in + i);
    _mm256_storeu_pd(out + i, _mm256_sub_pd(x, soft4(x, t, sign)));
  }
  for (; i < n; ++i) out[i] = in[i] - soft1(in[i], theta);
}

void project_nonneg(double* x, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  // max(x, 0) with x first so NaN propagates the same way as std::max(x, 0.0)
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_max_pd(zero, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] = std::max(x[i], 0.0);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

std::size_t count_nonzero(const double* x, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const int eq = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(x + i), zero, _CMP_EQ_OQ));
    c += 4 - static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(eq)));
  }
  for (; i < n; ++i) c += (x[i] != 0.0);
  return c;
}

void imag_residue(const complex* z, std::size_t n, double* max_imag, double* max_real) {
  const double* p = reinterpret_cast<const double*>(z);
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();  // lanes: (re, im, re, im)
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) m = _mm256_max_pd(m, _mm256_andnot_pd(sign, _mm256_loadu_pd(p + 2 * i)));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double mr = std::max(lanes[0], lanes[2]);
  double mi = std::max(lanes[1], lanes[3]);
  for (; i < n; ++i) {
    mi = std::max(mi, std::abs(z[i].imag()));
    mr = std::max(mr, std::abs(z[i].real()));
  }
  *max_imag = mi;
  *max_real = mr;
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{Level::Avx2,    "avx2",         scale_spectrum,
                                 accumulate_scaled, soft_threshold, threshold_residual,
                                 project_nonneg, axpy,           dot,
                                 count_nonzero,  imag_residue};
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &table : nullptr;
}

}  // namespace cylsh::simd

#else

namespace cylsh::simd {
const KernelTable* avx2_kernels() { return nullptr; }
}  // namespace cylsh::simd

#endif
