#include <doctest.h>

#include <random>

#include "cylshear/quality.hpp"
#include "oracles.hpp"

using namespace cylsh;

namespace {

Volume4 binary_ball(const GridDims& d) {
  Volume4 v(d);
  for (std::size_t t = 0; t < d.n4; ++t)
    for (std::size_t k = 0; k < d.n3; ++k)
      for (std::size_t j = 0; j < d.n2; ++j)
        for (std::size_t i = 0; i < d.n1; ++i) {
          const double x = i - 0.5 * d.n1 + 0.5, y = j - 0.5 * d.n2 + 0.5, z = k - 0.5 * d.n3 + 0.5;
          v.at(i, j, k, t) = x * x + y * y + z * z < 0.1 * d.n1 * d.n1 ? 1.0 : 0.0;
        }
  return v;
}

// SSIM with explicit window sums at every valid position.
double ssim_direct(const std::vector<double>& a, const std::vector<double>& b, std::size_t n, double range) {
  const int k = 11;
  double w[k], s = 0;
  for (int i = 0; i < k; ++i) s += (w[i] = std::exp(-(i - 5.0) * (i - 5.0) / 4.5));
  for (double& v : w) v /= s;
  const double c1 = 0.0001 * range * range, c2 = 0.0009 * range * range;
  double total = 0;
  std::size_t count = 0;
  for (std::size_t z = 0; z + k <= n; ++z)
    for (std::size_t y = 0; y + k <= n; ++y)
      for (std::size_t x = 0; x + k <= n; ++x) {
        double mx = 0, my = 0, sxx = 0, syy = 0, sxy = 0;
        for (int r = 0; r < k; ++r)
          for (int q = 0; q < k; ++q)
            for (int p = 0; p < k; ++p) {
              const double wt = w[p] * w[q] * w[r];
              const std::size_t i = (x + p) + n * ((y + q) + n * (z + r));
              mx += wt * a[i];
              my += wt * b[i];
              sxx += wt * a[i] * a[i];
              syy += wt * b[i] * b[i];
              sxy += wt * a[i] * b[i];
            }
        const double vx = sxx - mx * mx, vy = syy - my * my, cxy = sxy - mx * my;
        total += (2 * mx * my + c1) * (2 * cxy + c2) / ((mx * mx + my * my + c1) * (vx + vy + c2));
        ++count;
      }
  return total / count;
}

}  // namespace

TEST_CASE("psnr closed forms") {
  const GridDims d(8, 8, 8, 2);
  auto truth = binary_ball(d);
  Volume4 shifted = truth;
  for (auto& v : shifted.data()) v += 0.1;
  CHECK(psnr(shifted, truth) == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(psnr(truth, truth) == kPsnrIdentical);
  CHECK_THROWS_AS(psnr(truth, Volume4(GridDims(8, 8, 8, 4))), DimensionError);
}

TEST_CASE("psnr matches a naive double loop") {
  const GridDims d(8, 8, 8, 8);
  const auto a = oracle::random_volume(d, 1), b = oracle::random_volume(d, 2);
  long double mse = 0, peak = -1e300;
  for (std::size_t t = 0; t < d.n4; ++t)
    for (std::size_t q = 0; q < d.spatial_size(); ++q) {
      const long double diff = a.frame(t)[q] - b.frame(t)[q];
      mse += diff * diff;
      peak = std::max<long double>(peak, b.frame(t)[q]);
    }
  mse /= d.size();
  const double expect = double(10.0L * std::log10(peak * peak / mse));
  CHECK(std::abs(psnr(a, b) - expect) <= 1e-12);
}

TEST_CASE("psnr decreases as the perturbation grows") {
  const GridDims d(8, 8, 8, 2);
  const auto truth = binary_ball(d);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> z(d.size());
  for (auto& v : z) v = n(rng);
  double prev = kPsnrIdentical;
  for (double sigma : {0.01, 0.02, 0.05, 0.1, 0.2, 0.5}) {
    Volume4 r = truth;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += sigma * z[i];
    const double p = psnr(r, truth);
    CHECK(p < prev);
    prev = p;
  }
}

TEST_CASE("ssim of identical volumes is exactly one") {
  const GridDims d(16, 16, 12, 3);
  const auto v = oracle::random_volume(d, 4);
  CHECK(ssim3d_mean(v, v) == 1.0);
}

TEST_CASE("ssim matches explicit window sums") {
  const std::size_t n = 13;
  const auto a = oracle::random_vector(n * n * n, 5), b = oracle::random_vector(n * n * n, 6);
  const double got = ssim3d(a, b, n, n, n, 1.7).ssim;
  CHECK(std::abs(got - ssim_direct(a, b, n, 1.7)) <= 1e-12);
}

TEST_CASE("inverted binary phantom scores low") {
  const GridDims d(16, 16, 16, 2);
  const auto truth = binary_ball(d);
  Volume4 inv = truth;
  for (auto& v : inv.data()) v = 1.0 - v;
  const double s = ssim3d_mean(inv, truth);
  CHECK(s < 0.2);
  const auto parts = ssim3d(inv.frame(0), truth.frame(0), 16, 16, 16, 1.0);
  CHECK(parts.contrast_structure < 0.0);
}

TEST_CASE("ssim is symmetric; its contrast-structure factor ignores common offsets") {
  const std::size_t n = 14;
  const auto a = oracle::random_vector(n * n * n, 7);
  auto b = a;
  const auto noise = oracle::random_vector(n * n * n, 8);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] += 0.3 * noise[i];
  const auto ab = ssim3d(a, b, n, n, n, 2.0), ba = ssim3d(b, a, n, n, n, 2.0);
  CHECK(std::abs(ab.ssim - ba.ssim) <= 1e-12);
  auto a2 = a, b2 = b;
  for (auto& v : a2) v += 0.75;
  for (auto& v : b2) v += 0.75;
  const auto shifted = ssim3d(a2, b2, n, n, n, 2.0);
  CHECK(std::abs(shifted.contrast_structure - ab.contrast_structure) <= 1e-9);
}

TEST_CASE("frames smaller than the window are rejected") {
  const GridDims d(16, 16, 8, 2);
  const Volume4 v(d, 1.0);
  CHECK_THROWS_AS(ssim3d_mean(v, v), DimensionError);
}

TEST_CASE("metrics report has per-frame entries") {
  const GridDims d(12, 12, 12, 4);
  const auto truth = binary_ball(d);
  auto r = truth;
  for (std::size_t q = 0; q < d.spatial_size(); ++q) r.frame(2)[q] += 0.05;
  const auto rep = evaluate(r, truth);
  CHECK(rep.frame_psnr.size() == 4);
  CHECK(rep.frame_ssim.size() == 4);
  CHECK(rep.frame_ssim[0] == 1.0);
  CHECK(rep.frame_ssim[2] < 1.0);
  CHECK(rep.frame_psnr[2] == doctest::Approx(26.0206).epsilon(1e-4));
  const auto j = rep.to_json();
  CHECK(j.at("frame_psnr_db").at(0) == "inf");
  CHECK(j.contains("psnr_db"));
  CHECK(j.contains("mean_ssim"));
}
