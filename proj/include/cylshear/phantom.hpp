#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include <json.hpp>

#include "cylshear/core.hpp"

namespace cylsh {

// Spatial coordinates are normalized to [-1, 1] per axis; voxel i of an axis
// of length n sits at -1 + (2i + 1)/n.
double voxel_center(std::size_t i, std::size_t n);

enum class LawKind { Constant, Linear, Sinusoid };

/// Intensity as a function of the acquisition angle omega:
/// constant a, linear a + b*omega, or sinusoid a + b*sin(omega + phase).
struct IntensityLaw {
  LawKind kind = LawKind::Constant;
  double a = 0.0, b = 0.0, phase = 0.0;

  double operator()(double omega) const;
};

struct Ellipsoid {
  std::array<double, 3> center{0.0, 0.0, 0.0};
  std::array<double, 3> semi_axes{1.0, 1.0, 1.0};
  std::array<double, 3> rotation{0.0, 0.0, 0.0};  // z-y-x Euler angles, radians
  IntensityLaw law;

  bool contains(double x1, double x2, double x3) const;
};

using PhantomSpec = std::vector<Ellipsoid>;

PhantomSpec phantom_from_json(const nlohmann::json& j);
nlohmann::json phantom_to_json(const PhantomSpec& spec);
PhantomSpec load_phantom(const std::filesystem::path& path);
/// The spec shipped in data/default_phantom.json.
PhantomSpec default_phantom();

/// One frame at angle omega. Later ellipsoids overwrite earlier ones;
/// values are clamped to [0, 1].
Volume3 render_phantom(const PhantomSpec& spec, std::size_t n1, std::size_t n2, std::size_t n3, double omega);

/// Voxel averages: rendered on a grid refined by `factor` per axis, then
/// box-averaged back. factor 1 is render_phantom.
Volume3 render_phantom_averaged(const PhantomSpec& spec, std::size_t n1, std::size_t n2, std::size_t n3, double omega,
                                std::size_t factor);

/// Acquisition angles: the period [0, 2pi] is cut into 2*frames - 1 equal
/// pieces and every second piece is kept, sampled at `stages` equispaced
/// points including both ends.
struct OmegaSchedule {
  std::size_t frames = 0;
  std::size_t stages = 0;
  std::vector<std::vector<double>> omega;  // [frame][stage]

  std::size_t middle_stage() const { return stages / 2; }
  double truth_omega(std::size_t frame) const { return omega.at(frame).at(middle_stage()); }
};

OmegaSchedule build_omega_schedule(std::size_t frames, std::size_t stages = 15);

/// Refinement used for ground truth and for simulated measurements.
inline constexpr std::size_t kTruthSupersample = 2;

/// Ground truth: frame t at the middle stage of interval t, as voxel
/// averages over a grid refined by `supersample`.
Volume4 render_truth(const PhantomSpec& spec, const GridDims& dims, const OmegaSchedule& schedule,
                     std::size_t supersample = kTruthSupersample);

// Cylindrical cartoon-like functions f = h0*g0 + h1*chi_B*g1.

/// c + sum_k amp_k cos(pi <freq_k, x> + phase_k), multiplied by the C^2
/// window prod_i (1 - x_i^2)^3 when `windowed`.
struct TrigPoly {
  struct Term {
    double amplitude = 0.0;
    std::array<int, 3> freq{0, 0, 0};
    double phase = 0.0;
  };
  double constant = 0.0;
  std::vector<Term> terms;
  bool windowed = true;

  double operator()(double x1, double x2, double x3) const;
};

/// base + amplitude * (1 - s^2)^3 for |s| < 1, s = (t - center)/width,
/// t in [0, 1) the normalized frame time.
struct TemporalBump {
  double base = 1.0, amplitude = 0.0, center = 0.5, width = 0.5;

  double operator()(double t) const;
};

struct CartoonSpec {
  std::array<double, 3> center{0.0, 0.0, 0.0};
  std::array<double, 3> semi_axes{0.5, 0.5, 0.5};
  TrigPoly h0, h1;
  TemporalBump g0, g1;

  bool inside(double x1, double x2, double x3) const;
};

/// Ball of radius 0.5 with smooth inside and outside factors.
CartoonSpec default_cartoon();
/// default_cartoon() without the discontinuity (h1 = 0).
CartoonSpec smooth_cartoon();

CartoonSpec cartoon_from_json(const nlohmann::json& j);
nlohmann::json cartoon_to_json(const CartoonSpec& spec);

Volume4 render_cartoon(const CartoonSpec& spec, const GridDims& dims);

}  // namespace cylsh
