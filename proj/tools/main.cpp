// cylshear: command-line front end.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cylshear/approx_bench.hpp"
#include "cylshear/dwt4.hpp"
#include "cylshear/io.hpp"
#include "cylshear/parallel.hpp"
#include "cylshear/pdfp.hpp"
#include "cylshear/phantom.hpp"
#include "cylshear/projector.hpp"
#include "cylshear/quality.hpp"
#include "cylshear/simd/kernels.hpp"
#include "cylshear/transform.hpp"
#include "json_config.hpp"
#include "png_slices.hpp"

namespace fs = std::filesystem;
using cylsh::io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct Common {
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string config;
};

// Provenance attached to every output.
json provenance(const std::string& command, const json& effective, const Common& c) {
  return {{"tool", "cylshear"},
          {"version", CYLSHEAR_VERSION},
          {"command", command},
          {"config", effective},
          {"config_hash", cylsh::io::fingerprint(effective.dump())},
          {"config_file", c.config},
          {"seed", c.seed},
          {"threads", c.threads},
          {"simd", cylsh::simd::kernels().name}};
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw cylsh::IoError("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw cylsh::IoError("write failed: " + path.string());
}

void write_with_sidecar(const fs::path& path, const std::string& text, const json& prov) {
  write_text(path, text);
  cylsh::io::write_json(cylsh::io::sidecar_path(path), {{"provenance", prov}});
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

cylsh::GridDims grid(const std::vector<std::size_t>& dims, std::size_t frames) {
  if (dims.size() != 3) throw cylsh::ConfigError("--dims takes three extents");
  const cylsh::GridDims d(dims[0], dims[1], dims[2], frames);
  cylsh::validate(d);
  return d;
}

cylsh::PhantomSpec phantom_spec(const std::string& path) {
  return path.empty() ? cylsh::default_phantom() : cylsh::load_phantom(path);
}

// Shearlet options shared by reconstruct, transform and approx.
struct ShearOptions {
  int scales = 0;  // 0: largest valid configuration
  std::vector<int> radii;
  std::string layout = "odd";
  std::string window = "cylindrical4d";

  void add(CLI::App* app) {
    app->add_option("--scales", scales, "Shearlet scales J (0: automatic)")->capture_default_str();
    app->add_option("--shear-radii", radii, "Shear radius per scale, coarsest first (default 1 2 2 ...)");
    app->add_option("--layout", layout, "Wedge layout")->check(CLI::IsMember({"odd", "even"}))->capture_default_str();
  }

  cylsh::ShearConfig config(const cylsh::GridDims& d) const {
    if (scales == 0 && radii.empty()) {
      auto c = cylsh::default_shear_config(d);
      c.layout = layout == "odd" ? cylsh::WedgeLayout::Odd : cylsh::WedgeLayout::Even;
      cylsh::validate(c, d);
      return c;
    }
    cylsh::ShearConfig c;
    c.scales = scales > 0 ? scales : static_cast<int>(radii.size());
    c.shear_radii = radii;
    if (c.shear_radii.empty()) {
      c.shear_radii.assign(static_cast<std::size_t>(c.scales), 2);
      c.shear_radii[0] = 1;
    }
    c.layout = layout == "odd" ? cylsh::WedgeLayout::Odd : cylsh::WedgeLayout::Even;
    cylsh::validate(c, d);
    return c;
  }

  json to_json() const { return {{"scales", scales}, {"shear_radii", radii}, {"layout", layout}}; }
};

json config_json(const cylsh::ShearConfig& c) {
  return {{"scales", c.scales},
          {"shear_radii", c.shear_radii},
          {"layout", c.layout == cylsh::WedgeLayout::Odd ? "odd" : "even"}};
}

int resolve_wavelet_levels(int requested, const cylsh::GridDims& d) {
  if (requested > 0) return requested;
  const int levels = std::min(cylsh::dwt4_max_levels(d), 4);
  if (levels < 1) throw cylsh::DimensionError("grid " + d.to_string() + " admits no wavelet level");
  return levels;
}

// ---------------------------------------------------------------------------

struct PhantomCmd {
  std::string spec, out;
  std::vector<std::size_t> dims{64, 64, 16};
  std::size_t frames = 8, stages = 15, supersample = cylsh::kTruthSupersample;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("phantom", "Render the ground-truth volume of an ellipsoid phantom");
    c->add_option("--spec", spec, "Phantom JSON (default: bundled phantom)");
    c->add_option("--dims", dims, "Spatial extents n1 n2 n3")->expected(3)->capture_default_str();
    c->add_option("--frames", frames, "Time frames")->capture_default_str();
    c->add_option("--stages", stages, "Acquisition stages per frame (odd)")->capture_default_str();
    c->add_option("--supersample", supersample, "Voxel averaging factor")->capture_default_str();
    c->add_option("--out", out, "Output volume (.f32 + .json sidecar)")->required();
  }

  int run(const Common& common) const {
    const auto d = grid(dims, frames);
    const auto ps = phantom_spec(spec);
    const json eff{{"spec", spec}, {"dims", dims}, {"frames", frames}, {"stages", stages},
                   {"supersample", supersample}, {"out", out}};
    const auto sched = cylsh::build_omega_schedule(frames, stages);
    const auto v = cylsh::render_truth(ps, d, sched, supersample);
    ensure_parent(out);
    cylsh::io::write_volume(out, v,
                            {{"provenance", provenance("phantom", eff, common)},
                             {"phantom", cylsh::phantom_to_json(ps)},
                             {"truth_omega", [&] {
                                std::vector<double> w;
                                for (std::size_t t = 0; t < frames; ++t) w.push_back(sched.truth_omega(t));
                                return w;
                              }()}});
    std::cout << "wrote " << out << " (" << d.to_string() << ")\n";
    return kExitOk;
  }
};

struct SimulateCmd {
  std::string spec, out, truth, beam = "cone", noise_mode = "relative";
  std::vector<std::size_t> dims{64, 64, 16};
  std::size_t frames = 8, stages = 15, angles = 30;
  double noise_variance = 0.0, source_origin = 0.0, origin_detector = 0.0, pitch = 0.0;
  std::vector<std::size_t> cells;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("simulate", "Simulate dynamic sinograms of an ellipsoid phantom");
    c->add_option("--spec", spec, "Phantom JSON (default: bundled phantom)");
    c->add_option("--dims", dims, "Spatial extents n1 n2 n3")->expected(3)->capture_default_str();
    c->add_option("--frames", frames, "Time frames")->capture_default_str();
    c->add_option("--stages", stages, "Acquisition stages per frame (odd)")->capture_default_str();
    c->add_option("--angles", angles, "Projection angles per frame")->capture_default_str();
    c->add_option("--beam", beam, "Beam geometry")->check(CLI::IsMember({"cone", "parallel"}))->capture_default_str();
    c->add_option("--noise-variance", noise_variance, "Gaussian noise variance (0: noiseless)")->capture_default_str();
    c->add_option("--noise-mode", noise_mode, "Noise scale: relative to max|data| or absolute")
        ->check(CLI::IsMember({"relative", "absolute"}))
        ->capture_default_str();
    c->add_option("--source-origin", source_origin, "Source to rotation axis distance (0: default)");
    c->add_option("--origin-detector", origin_detector, "Rotation axis to detector distance (0: default)");
    c->add_option("--pitch", pitch, "Detector cell pitch (0: default)");
    c->add_option("--cells", cells, "Detector cells nu nv (default: cover the volume)")->expected(2);
    c->add_option("--out", out, "Output sinograms (.f32 + .json sidecar)")->required();
    c->add_option("--truth", truth, "Also write the ground-truth volume here");
  }

  int run(const Common& common) const {
    const auto d = grid(dims, frames);
    const auto mode = beam == "cone" ? cylsh::BeamMode::Cone : cylsh::BeamMode::Parallel;
    auto g = cylsh::make_geometry(mode, d.n1, d.n2, d.n3);
    if (source_origin > 0.0) g.source_origin = source_origin;
    if (origin_detector > 0.0) g.origin_detector = origin_detector;
    if (pitch > 0.0) g.pitch_u = g.pitch_v = pitch;
    if (!cells.empty()) {
      g.nu = cells[0];
      g.nv = cells[1];
    }
    cylsh::validate(g);
    const json eff{{"spec", spec}, {"dims", dims}, {"frames", frames}, {"stages", stages}, {"angles", angles},
                   {"beam", beam}, {"noise_variance", noise_variance}, {"noise_mode", noise_mode},
                   {"geometry", cylsh::geometry_to_json(g)}, {"out", out}, {"truth", truth}};
    const auto ps = phantom_spec(spec);
    const auto sched = cylsh::build_omega_schedule(frames, stages);
    cylsh::NoiseSpec noise;
    noise.mode = noise_mode == "relative" ? cylsh::NoiseMode::Relative : cylsh::NoiseMode::Absolute;
    noise.variance = noise_variance;
    noise.seed = common.seed;
    const auto sino = cylsh::simulate_measurements(ps, sched, g, cylsh::equispaced_angles(angles, mode), noise);
    const auto prov = provenance("simulate", eff, common);
    ensure_parent(out);
    cylsh::write_sinograms(out, sino, {{"provenance", prov}, {"phantom", cylsh::phantom_to_json(ps)}});
    std::cout << "wrote " << out << " (" << frames << " frames x " << angles << " angles, " << g.nu << "x" << g.nv
              << " cells)\n";
    if (!truth.empty()) {
      ensure_parent(truth);
      cylsh::io::write_volume(truth, cylsh::render_truth(ps, d, sched), {{"provenance", prov}});
      std::cout << "wrote " << truth << "\n";
    }
    return kExitOk;
  }
};

struct ReconstructCmd {
  std::string sinograms, out, history, png_dir, checkpoint_dir, reg = "cylsh";
  int iterations = 50, norm_iters = 100, wavelet_levels = 0, checkpoint_every = 0;
  double tol = 1e-4, gain = 0.1, rho = 0.0, lambda = 0.0;
  std::optional<double> beta, target_sparsity;
  bool keep_coarse = false;
  long png_slice = -1;
  std::vector<double> png_range{0.0, 1.0};
  ShearOptions shear;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("reconstruct", "PDFP reconstruction with a sparsifying regularizer");
    c->add_option("--sinograms", sinograms, "Input sinograms written by 'simulate'")->required();
    c->add_option("--reg", reg, "Regularizer")->check(CLI::IsMember({"cylsh", "dwt4"}))->capture_default_str();
    c->add_option("--iterations", iterations, "Maximum iterations")->capture_default_str();
    c->add_option("--tol", tol, "Stop when the relative change falls below this")->capture_default_str();
    c->add_option("--beta", beta, "Regularization weight (default: data-driven start)");
    c->add_option("--target-sparsity", target_sparsity, "Detail-coefficient sparsity for the beta controller");
    c->add_option("--gain", gain, "Beta controller gain")->capture_default_str();
    c->add_option("--rho", rho, "Primal step (0: 1.9/||R^T R||)")->capture_default_str();
    c->add_option("--lambda", lambda, "Dual step (0: 1/upper frame bound)")->capture_default_str();
    c->add_flag("--keep-coarse", keep_coarse, "Do not threshold the coarse band");
    c->add_option("--norm-iters", norm_iters, "Power iterations for ||R^T R||")->capture_default_str();
    shear.add(c);
    c->add_option("--wavelet-levels", wavelet_levels, "dwt4 levels (0: automatic)")->capture_default_str();
    c->add_option("--out", out, "Output volume (.f32 + .json sidecar)")->required();
    c->add_option("--history", history, "Per-iteration history CSV");
    c->add_option("--png-dir", png_dir, "Write one PNG slice per frame here");
    c->add_option("--png-slice", png_slice, "Axis-3 slice index for PNGs (-1: middle)")->capture_default_str();
    c->add_option("--png-range", png_range, "Gray-scale range shared by all PNGs")->expected(2)->capture_default_str();
    c->add_option("--checkpoint-every", checkpoint_every, "Write the iterate every k iterations (0: never)")
        ->capture_default_str();
    c->add_option("--checkpoint-dir", checkpoint_dir, "Directory for checkpoints");
  }

  int run(const Common& common) const {
    if (checkpoint_every < 0) throw cylsh::ConfigError("--checkpoint-every must be >= 0");
    if (checkpoint_every > 0 && checkpoint_dir.empty())
      throw cylsh::ConfigError("--checkpoint-every needs --checkpoint-dir");
    const auto sino = cylsh::read_sinograms(sinograms);
    const auto& g = sino.geometry;
    const cylsh::GridDims d(g.n1, g.n2, g.n3, sino.frames);

    std::shared_ptr<const cylsh::Regularizer> regularizer;
    json reg_json;
    if (reg == "cylsh") {
      const auto cfg = shear.config(d);
      regularizer = std::make_shared<cylsh::ShearletRegularizer>(
          std::make_shared<const cylsh::ShearletSystem>(cylsh::build_system(d, cfg)));
      reg_json = config_json(cfg);
    } else {
      const int levels = resolve_wavelet_levels(wavelet_levels, d);
      regularizer = std::make_shared<cylsh::WaveletRegularizer>(d, levels);
      reg_json = {{"levels", levels}};
    }

    cylsh::PdfpParams p;
    p.max_iters = iterations;
    p.rel_change_tol = tol;
    p.beta = beta;
    p.target_sparsity = target_sparsity;
    p.gain = gain;
    p.rho = rho;
    p.lambda = lambda;
    p.threshold_coarse = !keep_coarse;
    p.norm_iters = norm_iters;
    p.seed = common.seed;

    const json eff{{"sinograms", sinograms}, {"reg", reg}, {"regularizer", reg_json}, {"iterations", iterations},
                   {"tol", tol}, {"beta", beta ? json(*beta) : json(nullptr)},
                   {"target_sparsity", target_sparsity ? json(*target_sparsity) : json(nullptr)},
                   {"gain", gain}, {"rho", rho}, {"lambda", lambda}, {"keep_coarse", keep_coarse},
                   {"norm_iters", norm_iters}, {"out", out}, {"history", history}, {"png_dir", png_dir},
                   {"png_slice", png_slice}, {"png_range", png_range}, {"checkpoint_every", checkpoint_every},
                   {"checkpoint_dir", checkpoint_dir}};
    const auto prov = provenance("reconstruct", eff, common);

    cylsh::PdfpSolver::Observer observer;
    if (checkpoint_every > 0) {
      fs::create_directories(checkpoint_dir);
      observer = [&](int it, std::span<const double> f) {
        if (it == 0 || it % checkpoint_every != 0) return;
        char name[32];
        std::snprintf(name, sizeof name, "iter_%05d.f32", it);
        cylsh::io::write_volume(fs::path(checkpoint_dir) / name,
                                cylsh::Volume4(d, std::vector<double>(f.begin(), f.end())),
                                {{"provenance", prov}, {"iteration", it}});
      };
    }
    const auto res = cylsh::reconstruct(sino, regularizer, p, observer);
    const cylsh::Volume4 v(d, res.f);
    ensure_parent(out);
    cylsh::io::write_volume(out, v,
                            {{"provenance", prov},
                             {"solver",
                              {{"iterations", res.iterations},
                               {"converged", res.converged},
                               {"rho", res.rho},
                               {"lambda", res.lambda},
                               {"beta", res.beta},
                               {"gram_norm", res.gram_norm},
                               {"final_sparsity", res.history.back().sparsity}}}});
    std::cout << "wrote " << out << " after " << res.iterations << " iterations (beta " << res.beta
              << ", sparsity " << res.history.back().sparsity << ")\n";
    if (!history.empty()) write_with_sidecar(history, cylsh::history_csv(res.history), prov);
    if (!png_dir.empty()) {
      const std::size_t slice = png_slice < 0 ? d.n3 / 2 : static_cast<std::size_t>(png_slice);
      const auto files = cylsh::cli::write_slice_pngs(v, png_dir, fs::path(out).stem().string(), slice,
                                                      png_range[0], png_range[1]);
      for (const auto& f : files) cylsh::io::write_json(cylsh::io::sidecar_path(f), {{"provenance", prov}});
    }
    return kExitOk;
  }
};

struct TransformCmd {
  std::string direction, in, out;
  ShearOptions shear;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("transform", "Apply the shearlet transform, its inverse or its adjoint");
    c->add_option("direction", direction, "fwd: volume -> coefficients; inv, adj: coefficients -> volume")
        ->required()
        ->check(CLI::IsMember({"fwd", "inv", "adj"}));
    c->add_option("--in", in, "Input volume (fwd) or coefficient directory (inv, adj)")->required();
    c->add_option("--out", out, "Output coefficient directory (fwd) or volume (inv, adj)")->required();
    shear.add(c);
    c->add_option("--window", shear.window, "Window family")
        ->check(CLI::IsMember({"cylindrical4d", "spatial3d"}))
        ->capture_default_str();
  }

  int run(const Common& common) const {
    json eff{{"direction", direction}, {"in", in}, {"out", out}};
    if (direction == "fwd") {
      const auto f = cylsh::io::read_volume(in);
      const auto cfg = shear.config(f.dims());
      const auto mode =
          shear.window == "spatial3d" ? cylsh::WindowMode::Spatial3D : cylsh::WindowMode::Cylindrical4D;
      const auto sys = cylsh::build_system(f.dims(), cfg, mode);
      eff["shear"] = config_json(cfg);
      eff["window"] = shear.window;
      cylsh::write_coefficients(out, cylsh::forward(f, sys), sys);
      cylsh::io::write_json(fs::path(out) / "provenance.json", provenance("transform", eff, common));
      std::cout << "wrote " << sys.band_count() << " bands to " << out << "\n";
      return kExitOk;
    }
    const auto sys = cylsh::read_coefficient_system(in);
    const auto c = cylsh::read_coefficients(in, sys);
    const auto v = direction == "inv" ? cylsh::inverse(c, sys) : cylsh::adjoint(c, sys);
    ensure_parent(out);
    cylsh::io::write_volume(out, v, {{"provenance", provenance("transform", eff, common)}});
    std::cout << "wrote " << out << "\n";
    return kExitOk;
  }
};

struct ApproxCmd {
  std::string cartoon, csv, json_out;
  bool smooth = false, retain_lowpass = false;
  std::vector<std::size_t> dims{48, 48, 48};
  std::size_t frames = 8;
  std::vector<std::size_t> ladder{256, 65536, 9};
  int wavelet_levels = 0;
  ShearOptions shear;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("approx", "N-term approximation decay of shearlets vs 4D wavelets");
    c->add_option("--cartoon", cartoon, "Cartoon JSON (default: bundled cartoon)");
    c->add_flag("--smooth", smooth, "Drop the discontinuous component");
    c->add_option("--dims", dims, "Spatial extents n1 n2 n3")->expected(3)->capture_default_str();
    c->add_option("--frames", frames, "Time frames")->capture_default_str();
    c->add_option("--ladder", ladder, "Geometric N ladder: first last points")->expected(3)->capture_default_str();
    c->add_flag("--retain-lowpass", retain_lowpass, "Keep the lowpass band outside the N count");
    shear.add(c);
    c->add_option("--wavelet-levels", wavelet_levels, "dwt4 levels (0: automatic)")->capture_default_str();
    c->add_option("--csv", csv, "Output CSV transform,N,error2")->required();
    c->add_option("--json", json_out, "Output slope summary")->required();
  }

  int run(const Common& common) const {
    const auto d = grid(dims, frames);
    auto spec = cartoon.empty() ? cylsh::default_cartoon() : cylsh::cartoon_from_json(cylsh::io::read_json(cartoon));
    if (smooth) spec.h1 = cylsh::TrigPoly{};
    cylsh::ApproxOptions opt;
    opt.shear = shear.config(d);
    opt.shear_auto = false;
    opt.wavelet_levels = resolve_wavelet_levels(wavelet_levels, d);
    opt.retain_lowpass = retain_lowpass;
    const auto lad = cylsh::geometric_ladder(ladder[0], ladder[1], ladder[2]);
    const json eff{{"cartoon", cartoon}, {"smooth", smooth}, {"dims", dims}, {"frames", frames},
                   {"ladder", ladder}, {"retain_lowpass", retain_lowpass}, {"shear", config_json(opt.shear)},
                   {"wavelet_levels", opt.wavelet_levels}, {"csv", csv}, {"json", json_out}};
    const auto prov = provenance("approx", eff, common);
    const auto report = cylsh::decay_experiment(spec, d, lad, opt);
    write_with_sidecar(csv, report.to_csv(), prov);
    auto summary = report.slopes_json();
    summary["provenance"] = prov;
    ensure_parent(json_out);
    cylsh::io::write_json(json_out, summary);
    for (const auto& c : report.curves) std::cout << c.transform << " slope " << c.slope << "\n";
    return kExitOk;
  }
};

struct MetricsCmd {
  std::string recon, truth, out;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("metrics", "PSNR and 3D SSIM of a reconstruction against the truth");
    c->add_option("--recon", recon, "Reconstructed volume")->required();
    c->add_option("--truth", truth, "Ground-truth volume")->required();
    c->add_option("--out", out, "Output JSON report (default: stdout only)");
  }

  int run(const Common& common) const {
    const auto r = cylsh::io::read_volume(recon);
    const auto t = cylsh::io::read_volume(truth);
    auto report = cylsh::evaluate(r, t).to_json();
    std::cout << report.dump(2) << "\n";
    if (!out.empty()) {
      report["provenance"] = provenance("metrics", {{"recon", recon}, {"truth", truth}, {"out", out}}, common);
      ensure_parent(out);
      cylsh::io::write_json(out, report);
    }
    return kExitOk;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cylindrical shearlets for dynamic tomography"};
  app.set_version_flag("--version", std::string("cylshear ") + CYLSHEAR_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  app.config_formatter(std::make_shared<cylsh::cli::JsonConfig>());
  app.allow_config_extras(CLI::config_extras_mode::error);

  Common common;
  app.set_config("--config", "", "JSON config; keys mirror flags, one object per subcommand");
  app.add_option("--seed", common.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", common.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  PhantomCmd phantom;
  SimulateCmd simulate;
  ReconstructCmd reconstruct;
  TransformCmd transform;
  ApproxCmd approx;
  MetricsCmd metrics;
  phantom.add(app);
  simulate.add(app);
  reconstruct.add(app);
  transform.add(app);
  approx.add(app);
  metrics.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    cylsh::set_thread_count(common.threads);
    if (app.got_subcommand("phantom")) return phantom.run(common);
    if (app.got_subcommand("simulate")) return simulate.run(common);
    if (app.got_subcommand("reconstruct")) return reconstruct.run(common);
    if (app.got_subcommand("transform")) return transform.run(common);
    if (app.got_subcommand("approx")) return approx.run(common);
    if (app.got_subcommand("metrics")) return metrics.run(common);
  } catch (const cylsh::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cylsh::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const cylsh::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitConfig;
}
