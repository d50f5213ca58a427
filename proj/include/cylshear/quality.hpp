#pragma once

#include <limits>
#include <span>
#include <vector>

#include <json.hpp>

#include "cylshear/core.hpp"

namespace cylsh {

/// Returned by psnr() for identical volumes.
inline constexpr double kPsnrIdentical = std::numeric_limits<double>::infinity();

/// 10 log10(peak^2 / MSE) over all samples, peak = max of truth.
double psnr(const Volume4& recon, const Volume4& truth);

struct SsimParams {
  double sigma = 1.5;
  std::size_t support = 11;
  double k1 = 0.01, k2 = 0.03;
};

/// Mean of the local SSIM map and of its two factors over the valid region.
struct SsimValue {
  double ssim = 0.0;
  double luminance = 0.0;
  double contrast_structure = 0.0;
};

/// 3D SSIM of one spatial frame (n1 x n2 x n3 each at least the window
/// support). `range` is the dynamic range used in the stabilizing constants.
SsimValue ssim3d(std::span<const double> a, std::span<const double> b, std::size_t n1, std::size_t n2,
                 std::size_t n3, double range, const SsimParams& params = {});

struct MetricsReport {
  double psnr = 0.0;
  double mean_ssim = 0.0;
  std::vector<double> frame_psnr;
  std::vector<double> frame_ssim;

  nlohmann::json to_json() const;
};

/// Per-frame SSIM averaged over frames; dynamic range = max of truth.
double ssim3d_mean(const Volume4& recon, const Volume4& truth, const SsimParams& params = {});

MetricsReport evaluate(const Volume4& recon, const Volume4& truth, const SsimParams& params = {});

}  // namespace cylsh
