#pragma once

// Data-parallel inner loops shared by the transforms and the solver.
//
// Every kernel has a scalar reference implementation and, where the CPU
// supports it, an AVX2 variant picked at startup. Elementwise kernels are
// bit-identical across variants (no FMA contraction); reductions (dot) may
// differ in the last bits because the summation order differs.

#include <complex>
#include <cstddef>

namespace cylsh::simd {

using complex = std::complex<double>;

enum class Level { Scalar, Avx2 };

struct KernelTable {
  Level level;
  const char* name;
  // out[i] = in[i] * w[i]
  void (*scale_spectrum)(const complex* in, const double* w, complex* out, std::size_t n);
  // acc[i] += in[i] * w[i]
  void (*accumulate_scaled)(complex* acc, const complex* in, const double* w, std::size_t n);
  // out[i] = sign(x) * max(|x| - theta, 0)
  void (*soft_threshold)(const double* in, double* out, std::size_t n, double theta);
  // out[i] = x - soft_threshold(x), the dual update residual
  void (*threshold_residual)(const double* in, double* out, std::size_t n, double theta);
  // x[i] = max(x[i], 0)
  void (*project_nonneg)(double* x, std::size_t n);
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  std::size_t (*count_nonzero)(const double* x, std::size_t n);
  // max |Im z[i]| and max |z[i]|_inf over real/imag parts
  void (*imag_residue)(const complex* z, std::size_t n, double* max_imag, double* max_real);
};

const KernelTable& scalar_kernels();
/// nullptr when the build or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

bool available(Level level);

/// Currently active table. Defaults to the best available level, overridable
/// with the CYLSH_SIMD environment variable ("scalar" or "avx2").
const KernelTable& kernels();
void set_level(Level level);
Level active_level();
const char* level_name(Level level);

}  // namespace cylsh::simd
