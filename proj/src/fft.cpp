// DFT contract backed by FFTW. Plans use FFTW_ESTIMATE so the chosen
// algorithm, and hence the rounding, is the same on every run.
#include "cylshear/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "cylshear/simd/kernels.hpp"

namespace cylsh {
namespace {

using PlanKey = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t, int>;

struct PlanCache {
  std::mutex mutex;
  std::map<PlanKey, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }

  fftw_plan get(const GridDims& dims, int sign) {
    std::lock_guard<std::mutex> lock(mutex);
    const PlanKey key{dims.n1, dims.n2, dims.n3, dims.n4, sign};
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    // FFTW is row-major with the last index fastest; our axis 1 is fastest.
    const int n[4] = {static_cast<int>(dims.n4), static_cast<int>(dims.n3), static_cast<int>(dims.n2),
                      static_cast<int>(dims.n1)};
    auto* buf = fftw_alloc_complex(dims.size());
    fftw_plan plan = fftw_plan_dft(4, n, buf, buf, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    if (plan == nullptr) throw Error("FFTW failed to create a plan for " + dims.to_string());
    plans.emplace(key, plan);
    return plan;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void fft_inplace(std::span<complex> data, const GridDims& dims, int sign) {
  validate(dims);
  if (data.size() != dims.size()) throw DimensionError("fft: buffer length does not match grid " + dims.to_string());
  fftw_plan plan = cache().get(dims, sign);
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, p, p);
}

void dft_into(std::span<const double> in, const GridDims& dims, std::span<complex> out) {
  if (in.size() != dims.size() || out.size() != dims.size()) {
    throw DimensionError("dft: buffer length does not match grid " + dims.to_string());
  }
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = complex(in[i], 0.0);
  fft_inplace(out, dims, -1);
}

void idft_real_into(std::span<complex> data, const GridDims& dims, std::span<double> out, double* max_imag) {
  if (out.size() != dims.size()) throw DimensionError("idft: output length does not match grid " + dims.to_string());
  fft_inplace(data, dims, +1);
  const double scale = 1.0 / static_cast<double>(dims.size());
  double mi = 0.0, mr = 0.0;
  simd::kernels().imag_residue(data.data(), data.size(), &mi, &mr);
  mi *= scale;
  mr *= scale;
  if (max_imag != nullptr) *max_imag = mi;
  if (mi > kImagResidueTolerance * std::max(mr, mi) && mi > 1e-300) {
    throw NumericalError("idft: imaginary residue " + std::to_string(mi) + " against magnitude " +
                         std::to_string(mr) + " (spectrum not Hermitian-symmetric)");
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = data[i].real() * scale;
}

Spectrum4 dft(const Volume4& v) {
  Spectrum4 s(v.dims());
  dft_into(v.span(), v.dims(), s.span());
  return s;
}

Volume4 idft(const Spectrum4& s, double* max_imag) {
  std::vector<complex> work(s.data());
  Volume4 out(s.dims());
  idft_real_into(work, s.dims(), out.span(), max_imag);
  return out;
}

}  // namespace cylsh
