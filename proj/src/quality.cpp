#include "cylshear/quality.hpp"

#include <algorithm>
#include <cmath>

#include "cylshear/parallel.hpp"

namespace cylsh {

namespace {

double peak_of(std::span<const double> v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  return m;
}

double psnr_span(std::span<const double> a, std::span<const double> b, double peak) {
  double mse = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    mse += d * d;
  }
  mse /= static_cast<double>(a.size());
  if (mse == 0.0) return kPsnrIdentical;
  return 10.0 * std::log10(peak * peak / mse);
}

std::vector<double> gaussian(const SsimParams& p) {
  std::vector<double> w(p.support);
  const double c = 0.5 * static_cast<double>(p.support - 1);
  double s = 0.0;
  for (std::size_t i = 0; i < p.support; ++i) {
    const double x = static_cast<double>(i) - c;
    w[i] = std::exp(-x * x / (2.0 * p.sigma * p.sigma));
    s += w[i];
  }
  for (auto& v : w) v /= s;
  return w;
}

// Valid-region separable filtering of an n1 x n2 x n3 array.
std::vector<double> blur(const std::vector<double>& in, std::size_t n1, std::size_t n2, std::size_t n3,
                         const std::vector<double>& w) {
  const std::size_t k = w.size();
  const std::size_t m1 = n1 - k + 1, m2 = n2 - k + 1, m3 = n3 - k + 1;
  std::vector<double> a(m1 * n2 * n3), b(m1 * m2 * n3), c(m1 * m2 * m3);
  for (std::size_t z = 0; z < n3; ++z)
    for (std::size_t y = 0; y < n2; ++y)
      for (std::size_t x = 0; x < m1; ++x) {
        double s = 0.0;
        for (std::size_t t = 0; t < k; ++t) s += w[t] * in[(x + t) + n1 * (y + n2 * z)];
        a[x + m1 * (y + n2 * z)] = s;
      }
  for (std::size_t z = 0; z < n3; ++z)
    for (std::size_t y = 0; y < m2; ++y)
      for (std::size_t x = 0; x < m1; ++x) {
        double s = 0.0;
        for (std::size_t t = 0; t < k; ++t) s += w[t] * a[x + m1 * ((y + t) + n2 * z)];
        b[x + m1 * (y + m2 * z)] = s;
      }
  for (std::size_t z = 0; z < m3; ++z)
    for (std::size_t y = 0; y < m2; ++y)
      for (std::size_t x = 0; x < m1; ++x) {
        double s = 0.0;
        for (std::size_t t = 0; t < k; ++t) s += w[t] * b[x + m1 * (y + m2 * (z + t))];
        c[x + m1 * (y + m2 * z)] = s;
      }
  return c;
}

}  // namespace

double psnr(const Volume4& recon, const Volume4& truth) {
  require_same_dims(recon.dims(), truth.dims(), "psnr");
  return psnr_span(recon.span(), truth.span(), peak_of(truth.span()));
}

SsimValue ssim3d(std::span<const double> a, std::span<const double> b, std::size_t n1, std::size_t n2,
                 std::size_t n3, double range, const SsimParams& params) {
  if (a.size() != n1 * n2 * n3 || b.size() != a.size()) throw DimensionError("ssim3d: frame size mismatch");
  if (params.support == 0 || params.support % 2 == 0) throw ConfigError("ssim3d: window support must be odd");
  if (n1 < params.support || n2 < params.support || n3 < params.support) {
    throw DimensionError("ssim3d: frame " + std::to_string(n1) + "x" + std::to_string(n2) + "x" +
                         std::to_string(n3) + " is smaller than the " + std::to_string(params.support) +
                         "^3 window");
  }
  const auto w = gaussian(params);
  const std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto mx = blur(x, n1, n2, n3, w), my = blur(y, n1, n2, n3, w);
  const auto sxx = blur(xx, n1, n2, n3, w), syy = blur(yy, n1, n2, n3, w), sxy = blur(xy, n1, n2, n3, w);
  const double c1 = (params.k1 * range) * (params.k1 * range);
  const double c2 = (params.k2 * range) * (params.k2 * range);
  SsimValue out;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double vx = sxx[i] - mx[i] * mx[i], vy = syy[i] - my[i] * my[i], cxy = sxy[i] - mx[i] * my[i];
    const double l = (2.0 * mx[i] * my[i] + c1) / (mx[i] * mx[i] + my[i] * my[i] + c1);
    const double cs = (2.0 * cxy + c2) / (vx + vy + c2);
    out.ssim += l * cs;
    out.luminance += l;
    out.contrast_structure += cs;
  }
  const double n = static_cast<double>(mx.size());
  out.ssim /= n;
  out.luminance /= n;
  out.contrast_structure /= n;
  return out;
}

double ssim3d_mean(const Volume4& recon, const Volume4& truth, const SsimParams& params) {
  return evaluate(recon, truth, params).mean_ssim;
}

MetricsReport evaluate(const Volume4& recon, const Volume4& truth, const SsimParams& params) {
  require_same_dims(recon.dims(), truth.dims(), "metrics");
  const auto& d = truth.dims();
  MetricsReport r;
  const double range = peak_of(truth.span());
  r.psnr = psnr(recon, truth);
  r.frame_psnr.resize(d.n4);
  r.frame_ssim.resize(d.n4);
  parallel_for(d.n4, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t t = begin; t < end; ++t) {
      r.frame_psnr[t] = psnr_span(recon.frame(t), truth.frame(t), range);
      r.frame_ssim[t] = ssim3d(recon.frame(t), truth.frame(t), d.n1, d.n2, d.n3, range, params).ssim;
    }
  });
  double s = 0.0;
  for (double v : r.frame_ssim) s += v;
  r.mean_ssim = s / static_cast<double>(d.n4);
  return r;
}

nlohmann::json MetricsReport::to_json() const {
  auto db = [](double v) -> nlohmann::json {
    if (std::isinf(v)) return "inf";
    return v;
  };
  nlohmann::json fp = nlohmann::json::array();
  for (double v : frame_psnr) fp.push_back(db(v));
  return {{"psnr_db", db(psnr)}, {"mean_ssim", mean_ssim}, {"frame_psnr_db", fp}, {"frame_ssim", frame_ssim}};
}

}  // namespace cylsh
