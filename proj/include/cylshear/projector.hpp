#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <vector>

#include <json.hpp>

#include "cylshear/core.hpp"
#include "cylshear/phantom.hpp"

namespace cylsh {

enum class BeamMode { Cone, Parallel };

/// Circular scan about axis 3. The volume is centered on the rotation axis;
/// lengths are in world units with voxels of edge `voxel_size`.
///
/// At angle theta the source direction is e_r = (cos, sin, 0) and the
/// detector axes are e_u = (-sin, cos, 0), e_v = (0, 0, 1). Detector cells
/// are indexed u fastest, then v.
struct Geometry {
  BeamMode mode = BeamMode::Cone;
  std::size_t n1 = 0, n2 = 0, n3 = 0;
  double voxel_size = 1.0;
  std::size_t nu = 0, nv = 0;
  double pitch_u = 1.0, pitch_v = 1.0;
  double source_origin = 0.0;      // cone only
  double origin_detector = 0.0;    // cone only

  std::size_t voxel_count() const { return n1 * n2 * n3; }
  std::size_t cells() const { return nu * nv; }
  /// Same scan with voxels, detector cells and their counts refined by `factor`.
  Geometry refined(std::size_t factor) const;
};

/// Default scan for an n1 x n2 x n3 volume. Cone: source-origin distance
/// three volume diagonals, magnification 2, detector pitch 2 voxels.
/// Parallel: pitch 1 voxel. Detector sizes are the smallest even counts
/// covering the footprint.
Geometry make_geometry(BeamMode mode, std::size_t n1, std::size_t n2, std::size_t n3, double voxel_size = 1.0);

/// Throws ConfigError when the detector does not cover the volume footprint
/// or the source sits inside the circumscribed cylinder.
void validate(const Geometry& g);

nlohmann::json geometry_to_json(const Geometry& g);
Geometry geometry_from_json(const nlohmann::json& j);

/// n equispaced angles over [0, 2pi) for cone beams, [0, pi) for parallel.
std::vector<double> equispaced_angles(std::size_t n, BeamMode mode);

/// Stage (0-based) that acquires angle i of n when a frame is split into
/// `stages` contiguous batches.
std::size_t stage_of_angle(std::size_t i, std::size_t n, std::size_t stages);

/// Ray-driven projector with exact voxel intersection lengths.
/// Sinogram layout per frame: angle slowest, then v, then u.
class Projector {
 public:
  Projector(Geometry g, std::vector<double> angles);

  const Geometry& geometry() const { return geom_; }
  const std::vector<double>& angles() const { return angles_; }
  std::size_t sinogram_size() const { return angles_.size() * geom_.cells(); }

  /// sino = R vol (overwrites).
  void project(std::span<const double> vol, std::span<double> sino) const;
  /// vol = R^T sino (overwrites).
  void backproject(std::span<const double> sino, std::span<double> vol) const;

  /// Projects only the angles listed in `subset` into their sinogram rows.
  void project_subset(std::span<const double> vol, std::span<const std::size_t> subset, std::span<double> sino) const;

  /// Calls visit(voxel, length) for every voxel crossed by the ray of
  /// (angle a, cell iu, iv).
  template <class F>
  void trace(std::size_t a, std::size_t iu, std::size_t iv, F&& visit) const;

 private:
  struct Ray {
    double p[3], d[3];  // p + alpha * d, alpha in [0, 1]
  };
  Ray ray(std::size_t a, std::size_t iu, std::size_t iv) const;
  template <class F>
  void walk(const Ray& r, F&& visit) const;

  Geometry geom_;
  std::vector<double> angles_;
  std::vector<double> cos_, sin_;
};

enum class NoiseMode { Relative, Absolute };

struct NoiseSpec {
  NoiseMode mode = NoiseMode::Relative;
  double variance = 0.0;
  std::uint64_t seed = 0;
};

/// Projection data of all frames: frames x angles x nv x nu.
struct SinogramSet {
  Geometry geometry;
  std::vector<double> angles;
  std::size_t frames = 0;
  std::vector<double> data;
  NoiseSpec noise;
  double noise_sigma = 0.0;  // standard deviation actually applied

  std::size_t frame_size() const { return angles.size() * geometry.cells(); }
  std::span<double> frame(std::size_t t) { return std::span<double>(data).subspan(t * frame_size(), frame_size()); }
  std::span<const double> frame(std::size_t t) const {
    return std::span<const double>(data).subspan(t * frame_size(), frame_size());
  }
};

/// Adds white Gaussian noise. Relative: standard deviation
/// sqrt(variance) * max|data|; absolute: sqrt(variance). Returns the sigma.
double add_noise(std::span<double> data, const NoiseSpec& noise);

/// Simulates the dynamic acquisition. Each frame is rendered and projected
/// at twice the target resolution on a twice-finer detector, one batch of
/// angles per stage of the schedule, then detector cells are 2x2 averaged
/// and noise is added.
SinogramSet simulate_measurements(const PhantomSpec& spec, const OmegaSchedule& schedule, const Geometry& target,
                                  const std::vector<double>& angles, const NoiseSpec& noise);

/// Applies the projector frame by frame (block-diagonal over time).
void project_frames(const Projector& p, std::span<const double> vol4, std::size_t frames, std::span<double> sino);
void backproject_frames(const Projector& p, std::span<const double> sino, std::size_t frames, std::span<double> vol4);

void write_sinograms(const std::filesystem::path& path, const SinogramSet& s, const nlohmann::json& extra = {});
SinogramSet read_sinograms(const std::filesystem::path& path);

// ---------------------------------------------------------------------------

template <class F>
void Projector::walk(const Ray& r, F&& visit) const {
  const double vs = geom_.voxel_size;
  const std::size_t n[3] = {geom_.n1, geom_.n2, geom_.n3};
  double lo[3], hi[3];
  for (int k = 0; k < 3; ++k) {
    hi[k] = 0.5 * static_cast<double>(n[k]) * vs;
    lo[k] = -hi[k];
  }
  // Clip the segment to the volume box.
  double a0 = 0.0, a1 = 1.0;
  for (int k = 0; k < 3; ++k) {
    if (r.d[k] == 0.0) {
      if (r.p[k] < lo[k] || r.p[k] > hi[k]) return;
      continue;
    }
    double t0 = (lo[k] - r.p[k]) / r.d[k], t1 = (hi[k] - r.p[k]) / r.d[k];
    if (t0 > t1) std::swap(t0, t1);
    a0 = std::max(a0, t0);
    a1 = std::min(a1, t1);
  }
  if (!(a1 > a0)) return;
  const double len = std::sqrt(r.d[0] * r.d[0] + r.d[1] * r.d[1] + r.d[2] * r.d[2]);

  // Next plane crossing per axis.
  double next[3];
  long plane[3], dir[3];
  for (int k = 0; k < 3; ++k) {
    if (r.d[k] == 0.0) {
      next[k] = std::numeric_limits<double>::infinity();
      plane[k] = dir[k] = 0;
      continue;
    }
    dir[k] = r.d[k] > 0 ? 1 : -1;
    const double x = (r.p[k] + a0 * r.d[k] - lo[k]) / vs;  // in plane units
    plane[k] = dir[k] > 0 ? static_cast<long>(std::floor(x)) + 1 : static_cast<long>(std::ceil(x)) - 1;
    next[k] = (lo[k] + static_cast<double>(plane[k]) * vs - r.p[k]) / r.d[k];
    while (next[k] <= a0) {
      plane[k] += dir[k];
      next[k] = (lo[k] + static_cast<double>(plane[k]) * vs - r.p[k]) / r.d[k];
    }
  }

  double a = a0;
  while (a < a1) {
    double b = std::min({next[0], next[1], next[2], a1});
    if (b > a) {
      const double m = 0.5 * (a + b);
      std::size_t idx[3];
      bool inside = true;
      for (int k = 0; k < 3; ++k) {
        const double x = std::floor((r.p[k] + m * r.d[k] - lo[k]) / vs);
        if (x < 0.0 || x >= static_cast<double>(n[k])) {
          inside = false;
          break;
        }
        idx[k] = static_cast<std::size_t>(x);
      }
      if (inside) visit(idx[0] + n[0] * (idx[1] + n[1] * idx[2]), (b - a) * len);
    }
    for (int k = 0; k < 3; ++k) {
      if (next[k] == b) {
        plane[k] += dir[k];
        next[k] = (lo[k] + static_cast<double>(plane[k]) * vs - r.p[k]) / r.d[k];
      }
    }
    a = b;
  }
}

template <class F>
void Projector::trace(std::size_t a, std::size_t iu, std::size_t iv, F&& visit) const {
  walk(ray(a, iu, iv), visit);
}

}  // namespace cylsh
