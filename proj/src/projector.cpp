#include "cylshear/projector.hpp"

#include <numbers>
#include <random>

#include "cylshear/io.hpp"
#include "cylshear/parallel.hpp"

namespace cylsh {

using nlohmann::json;

namespace {

std::size_t even_ceil(double x) {
  auto n = static_cast<std::size_t>(std::ceil(x - 1e-9));
  return n + (n % 2);
}

double cylinder_radius(const Geometry& g) {
  return 0.5 * g.voxel_size * std::hypot(static_cast<double>(g.n1), static_cast<double>(g.n2));
}

double half_height(const Geometry& g) { return 0.5 * g.voxel_size * static_cast<double>(g.n3); }

// Half extents of the detector area hit by rays through the volume.
std::pair<double, double> footprint(const Geometry& g) {
  const double r = cylinder_radius(g), h = half_height(g);
  if (g.mode == BeamMode::Parallel) return {r, h};
  const double sdd = g.source_origin + g.origin_detector;
  const double u = sdd * r / std::sqrt(g.source_origin * g.source_origin - r * r);
  const double v = sdd * h / (g.source_origin - r);
  return {u, v};
}

const char* mode_name(BeamMode m) { return m == BeamMode::Cone ? "cone" : "parallel"; }

}  // namespace

Geometry Geometry::refined(std::size_t factor) const {
  Geometry g = *this;
  const double f = static_cast<double>(factor);
  g.n1 *= factor;
  g.n2 *= factor;
  g.n3 *= factor;
  g.voxel_size /= f;
  g.nu *= factor;
  g.nv *= factor;
  g.pitch_u /= f;
  g.pitch_v /= f;
  return g;
}

Geometry make_geometry(BeamMode mode, std::size_t n1, std::size_t n2, std::size_t n3, double voxel_size) {
  Geometry g;
  g.mode = mode;
  g.n1 = n1;
  g.n2 = n2;
  g.n3 = n3;
  g.voxel_size = voxel_size;
  if (mode == BeamMode::Cone) {
    const double diag = voxel_size * std::sqrt(double(n1 * n1 + n2 * n2 + n3 * n3));
    g.source_origin = 3.0 * diag;
    g.origin_detector = g.source_origin;
    g.pitch_u = g.pitch_v = 2.0 * voxel_size;
  } else {
    g.pitch_u = g.pitch_v = voxel_size;
  }
  const auto [u, v] = footprint(g);
  g.nu = even_ceil(2.0 * u / g.pitch_u);
  g.nv = even_ceil(2.0 * v / g.pitch_v);
  validate(g);
  return g;
}

void validate(const Geometry& g) {
  if (g.n1 == 0 || g.n2 == 0 || g.n3 == 0) throw ConfigError("geometry: empty volume");
  if (!(g.voxel_size > 0.0) || !(g.pitch_u > 0.0) || !(g.pitch_v > 0.0))
    throw ConfigError("geometry: voxel size and detector pitch must be positive");
  if (g.nu == 0 || g.nv == 0) throw ConfigError("geometry: empty detector");
  if (g.mode == BeamMode::Cone) {
    if (!(g.source_origin > cylinder_radius(g)))
      throw ConfigError("geometry: source lies inside the volume's circumscribed cylinder");
    if (!(g.origin_detector >= 0.0)) throw ConfigError("geometry: negative origin-detector distance");
  }
  const auto [u, v] = footprint(g);
  const double tol = 1e-9 * (1.0 + u + v);
  if (0.5 * static_cast<double>(g.nu) * g.pitch_u + tol < u || 0.5 * static_cast<double>(g.nv) * g.pitch_v + tol < v) {
    throw ConfigError("geometry: detector " + std::to_string(g.nu) + "x" + std::to_string(g.nv) +
                      " does not cover the volume footprint (needs half-extents " + std::to_string(u) + ", " +
                      std::to_string(v) + ")");
  }
}

json geometry_to_json(const Geometry& g) {
  json j{{"mode", mode_name(g.mode)},
         {"volume", {g.n1, g.n2, g.n3}},
         {"voxel_size", g.voxel_size},
         {"detector", {g.nu, g.nv}},
         {"pitch", {g.pitch_u, g.pitch_v}}};
  if (g.mode == BeamMode::Cone) {
    j["source_origin"] = g.source_origin;
    j["origin_detector"] = g.origin_detector;
  }
  return j;
}

Geometry geometry_from_json(const json& j) {
  io::require_known_keys(j, {"mode", "volume", "voxel_size", "detector", "pitch", "source_origin", "origin_detector"},
                         "geometry");
  try {
    Geometry g;
    const auto mode = j.at("mode").get<std::string>();
    if (mode == "cone")
      g.mode = BeamMode::Cone;
    else if (mode == "parallel")
      g.mode = BeamMode::Parallel;
    else
      throw ConfigError("geometry: unknown mode '" + mode + "'");
    const auto vol = j.at("volume").get<std::array<std::size_t, 3>>();
    g.n1 = vol[0];
    g.n2 = vol[1];
    g.n3 = vol[2];
    g.voxel_size = j.value("voxel_size", 1.0);
    const auto det = j.at("detector").get<std::array<std::size_t, 2>>();
    g.nu = det[0];
    g.nv = det[1];
    const auto pitch = j.at("pitch").get<std::array<double, 2>>();
    g.pitch_u = pitch[0];
    g.pitch_v = pitch[1];
    g.source_origin = j.value("source_origin", 0.0);
    g.origin_detector = j.value("origin_detector", 0.0);
    validate(g);
    return g;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("geometry: ") + e.what());
  }
}

std::vector<double> equispaced_angles(std::size_t n, BeamMode mode) {
  const double span = mode == BeamMode::Cone ? 2.0 * std::numbers::pi : std::numbers::pi;
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = span * static_cast<double>(i) / static_cast<double>(n);
  return a;
}

std::size_t stage_of_angle(std::size_t i, std::size_t n, std::size_t stages) { return i * stages / n; }

Projector::Projector(Geometry g, std::vector<double> angles) : geom_(std::move(g)), angles_(std::move(angles)) {
  validate(geom_);
  if (angles_.empty()) throw ConfigError("projector: no angles");
  for (double a : angles_) {
    cos_.push_back(std::cos(a));
    sin_.push_back(std::sin(a));
  }
}

Projector::Ray Projector::ray(std::size_t a, std::size_t iu, std::size_t iv) const {
  const double c = cos_[a], s = sin_[a];
  const double u = (static_cast<double>(iu) + 0.5 - 0.5 * static_cast<double>(geom_.nu)) * geom_.pitch_u;
  const double v = (static_cast<double>(iv) + 0.5 - 0.5 * static_cast<double>(geom_.nv)) * geom_.pitch_v;
  const double eu[3] = {-s, c, 0.0};
  double from[3], to[3];
  if (geom_.mode == BeamMode::Parallel) {
    const double reach = 2.0 * (cylinder_radius(geom_) + half_height(geom_)) + 1.0;
    for (int k = 0; k < 2; ++k) {
      const double er = k == 0 ? c : s;
      from[k] = u * eu[k] + reach * er;
      to[k] = u * eu[k] - reach * er;
    }
    from[2] = to[2] = v;
  } else {
    from[0] = geom_.source_origin * c;
    from[1] = geom_.source_origin * s;
    from[2] = 0.0;
    to[0] = -geom_.origin_detector * c + u * eu[0];
    to[1] = -geom_.origin_detector * s + u * eu[1];
    to[2] = v;
  }
  Ray r;
  for (int k = 0; k < 3; ++k) {
    r.p[k] = from[k];
    r.d[k] = to[k] - from[k];
  }
  return r;
}

void Projector::project(std::span<const double> vol, std::span<double> sino) const {
  std::vector<std::size_t> all(angles_.size());
  for (std::size_t a = 0; a < all.size(); ++a) all[a] = a;
  project_subset(vol, all, sino);
}

void Projector::project_subset(std::span<const double> vol, std::span<const std::size_t> subset,
                               std::span<double> sino) const {
  if (vol.size() != geom_.voxel_count() || sino.size() != sinogram_size())
    throw DimensionError("project: buffer sizes do not match the geometry");
  const std::size_t nu = geom_.nu, nv = geom_.nv;
  parallel_for(subset.size() * nv, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t row = begin; row < end; ++row) {
      const std::size_t a = subset[row / nv], iv = row % nv;
      double* out = sino.data() + (a * nv + iv) * nu;
      for (std::size_t iu = 0; iu < nu; ++iu) {
        double acc = 0.0;
        walk(ray(a, iu, iv), [&](std::size_t q, double w) { acc += w * vol[q]; });
        out[iu] = acc;
      }
    }
  });
}

void Projector::backproject(std::span<const double> sino, std::span<double> vol) const {
  if (vol.size() != geom_.voxel_count() || sino.size() != sinogram_size())
    throw DimensionError("backproject: buffer sizes do not match the geometry");
  const std::size_t nu = geom_.nu, nv = geom_.nv, rows = angles_.size() * nv;
  const std::size_t workers = std::min(thread_count(), rows);
  std::vector<std::vector<double>> partial(workers > 1 ? workers - 1 : 0);
  std::fill(vol.begin(), vol.end(), 0.0);
  parallel_for(rows, [&](std::size_t begin, std::size_t end, std::size_t worker) {
    double* acc = vol.data();
    if (worker > 0) {
      partial[worker - 1].assign(vol.size(), 0.0);
      acc = partial[worker - 1].data();
    }
    for (std::size_t row = begin; row < end; ++row) {
      const std::size_t a = row / nv, iv = row % nv;
      const double* in = sino.data() + row * nu;
      for (std::size_t iu = 0; iu < nu; ++iu) {
        const double m = in[iu];
        if (m == 0.0) continue;
        walk(ray(a, iu, iv), [&](std::size_t q, double w) { acc[q] += w * m; });
      }
    }
  });
  for (const auto& p : partial)
    for (std::size_t i = 0; i < p.size(); ++i) vol[i] += p[i];
}

double add_noise(std::span<double> data, const NoiseSpec& noise) {
  if (noise.variance < 0.0) throw ConfigError("noise: variance must be >= 0");
  if (noise.variance == 0.0) return 0.0;
  double scale = 1.0;
  if (noise.mode == NoiseMode::Relative) {
    scale = 0.0;
    for (double v : data) scale = std::max(scale, std::abs(v));
  }
  const double sigma = std::sqrt(noise.variance) * scale;
  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : data) v += sigma * normal(rng);
  return sigma;
}

SinogramSet simulate_measurements(const PhantomSpec& spec, const OmegaSchedule& schedule, const Geometry& target,
                                  const std::vector<double>& angles, const NoiseSpec& noise) {
  validate(target);
  const Geometry fine = target.refined(2);
  // The simulator never uses the reconstruction grid.
  if (fine.n1 != 2 * target.n1 || fine.nu != 2 * target.nu || !(fine.voxel_size < target.voxel_size))
    throw NumericalError("simulate: fine grid is not a 2x refinement");
  const Projector fine_proj(fine, angles);
  const Projector coarse(target, angles);

  SinogramSet out;
  out.geometry = target;
  out.angles = angles;
  out.frames = schedule.frames;
  out.noise = noise;
  out.data.assign(out.frames * out.frame_size(), 0.0);

  std::vector<double> fine_sino(fine_proj.sinogram_size());
  for (std::size_t t = 0; t < schedule.frames; ++t) {
    std::fill(fine_sino.begin(), fine_sino.end(), 0.0);
    for (std::size_t s = 0; s < schedule.stages; ++s) {
      std::vector<std::size_t> batch;
      for (std::size_t a = 0; a < angles.size(); ++a)
        if (stage_of_angle(a, angles.size(), schedule.stages) == s) batch.push_back(a);
      if (batch.empty()) continue;
      const auto frame = render_phantom(spec, fine.n1, fine.n2, fine.n3, schedule.omega[t][s]);
      fine_proj.project_subset(frame.data, batch, fine_sino);
    }
    auto dst = out.frame(t);
    for (std::size_t a = 0; a < angles.size(); ++a)
      for (std::size_t iv = 0; iv < target.nv; ++iv)
        for (std::size_t iu = 0; iu < target.nu; ++iu) {
          double sum = 0.0;
          for (std::size_t dv = 0; dv < 2; ++dv)
            for (std::size_t du = 0; du < 2; ++du)
              sum += fine_sino[(a * fine.nv + 2 * iv + dv) * fine.nu + 2 * iu + du];
          dst[(a * target.nv + iv) * target.nu + iu] = 0.25 * sum;
        }
  }
  out.noise_sigma = add_noise(out.data, noise);
  return out;
}

void project_frames(const Projector& p, std::span<const double> vol4, std::size_t frames, std::span<double> sino) {
  const std::size_t nv = p.geometry().voxel_count(), ns = p.sinogram_size();
  if (vol4.size() != frames * nv || sino.size() != frames * ns) throw DimensionError("project_frames: size mismatch");
  for (std::size_t t = 0; t < frames; ++t) p.project(vol4.subspan(t * nv, nv), sino.subspan(t * ns, ns));
}

void backproject_frames(const Projector& p, std::span<const double> sino, std::size_t frames, std::span<double> vol4) {
  const std::size_t nv = p.geometry().voxel_count(), ns = p.sinogram_size();
  if (vol4.size() != frames * nv || sino.size() != frames * ns)
    throw DimensionError("backproject_frames: size mismatch");
  for (std::size_t t = 0; t < frames; ++t) p.backproject(sino.subspan(t * ns, ns), vol4.subspan(t * nv, nv));
}

void write_sinograms(const std::filesystem::path& path, const SinogramSet& s, const json& extra) {
  io::write_f32(path, s.data);
  json side = extra.is_object() ? extra : json::object();
  side["geometry"] = geometry_to_json(s.geometry);
  side["angles"] = s.angles;
  side["frames"] = s.frames;
  side["shape"] = {s.frames, s.angles.size(), s.geometry.nv, s.geometry.nu};
  side["dtype"] = "f32";
  side["order"] = "u-fastest, then v, angle, frame";
  side["noise"] = {{"mode", s.noise.mode == NoiseMode::Relative ? "relative" : "absolute"},
                   {"variance", s.noise.variance},
                   {"seed", s.noise.seed},
                   {"sigma", s.noise_sigma},
                   {"noiseless", s.noise.variance == 0.0}};
  io::write_json(io::sidecar_path(path), side);
}

SinogramSet read_sinograms(const std::filesystem::path& path) {
  const auto side = io::read_json(io::sidecar_path(path));
  SinogramSet s;
  try {
    s.geometry = geometry_from_json(side.at("geometry"));
    s.angles = side.at("angles").get<std::vector<double>>();
    s.frames = side.at("frames").get<std::size_t>();
    const auto& n = side.at("noise");
    s.noise.mode = n.at("mode").get<std::string>() == "absolute" ? NoiseMode::Absolute : NoiseMode::Relative;
    s.noise.variance = n.at("variance").get<double>();
    s.noise.seed = n.at("seed").get<std::uint64_t>();
    s.noise_sigma = n.at("sigma").get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(io::sidecar_path(path).string() + ": " + e.what());
  }
  s.data = io::read_f32(path, s.frames * s.frame_size());
  return s;
}

}  // namespace cylsh
