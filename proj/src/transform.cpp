#include "cylshear/transform.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cylshear/fft.hpp"
#include "cylshear/io.hpp"
#include "cylshear/parallel.hpp"
#include "cylshear/simd/kernels.hpp"

namespace cylsh {

namespace {

const char* mode_name(WindowMode m) { return m == WindowMode::Cylindrical4D ? "cylindrical4d" : "spatial3d"; }
const char* layout_name(WedgeLayout l) { return l == WedgeLayout::Odd ? "odd" : "even"; }

// out = spectrum * V, V broadcast along the time axis.
void apply_directional(const simd::KernelTable& k, const complex* spectrum, std::span<const double> filter,
                       complex* out, const GridDims& dims) {
  const std::size_t nsp = dims.spatial_size();
  for (std::size_t t = 0; t < dims.n4; ++t) k.scale_spectrum(spectrum + t * nsp, filter.data(), out + t * nsp, nsp);
}

void accumulate_directional(const simd::KernelTable& k, complex* acc, const complex* spectrum,
                            std::span<const double> filter, const GridDims& dims) {
  const std::size_t nsp = dims.spatial_size();
  for (std::size_t t = 0; t < dims.n4; ++t) k.accumulate_scaled(acc + t * nsp, spectrum + t * nsp, filter.data(), nsp);
}

void check_buffer(std::size_t have, std::size_t want, const char* what) {
  if (have != want) {
    throw DimensionError(std::string(what) + ": buffer length " + std::to_string(have) + ", expected " +
                         std::to_string(want));
  }
}

}  // namespace

ShearConfig default_shear_config(const GridDims& dims) {
  for (int j = std::min(max_scales(dims), 3); j >= 1; --j) {
    ShearConfig cfg;
    cfg.scales = j;
    cfg.shear_radii.assign(static_cast<std::size_t>(j), 2);
    cfg.shear_radii[0] = 1;
    try {
      validate(cfg, dims);
      return cfg;
    } catch (const ConfigError&) {
    }
  }
  throw DimensionError("no shearlet configuration fits grid " + dims.to_string());
}

ShearletSystem build_system(const GridDims& dims, const ShearConfig& cfg, WindowMode mode) {
  ShearletSystem sys;
  sys.dims = dims;
  sys.config = cfg;
  sys.mode = mode;
  sys.windows = build_windows(dims, cfg.scales, mode);
  sys.filters = build_filters(dims, cfg);
  for (int j = 1; j <= cfg.scales; ++j) {
    const auto& idx = sys.filters.indices(j);
    sys.labels.insert(sys.labels.end(), idx.begin(), idx.end());
  }
  return sys;
}

CoeffSet::CoeffSet(const ShearletSystem& sys)
    : dims_(sys.dims), labels_(sys.labels), data_(sys.coefficient_count(), 0.0) {}

CoeffSet::CoeffSet(const GridDims& dims, std::vector<ShearIndex> labels, std::vector<double> data)
    : dims_(dims), labels_(std::move(labels)), data_(std::move(data)) {
  validate(dims_);
  check_buffer(data_.size(), band_count() * dims_.size(), "CoeffSet");
}

std::span<double> CoeffSet::band(std::size_t b) {
  if (b >= band_count()) throw DimensionError("CoeffSet: band index out of range");
  return std::span<double>(data_).subspan(b * band_size(), band_size());
}

std::span<const double> CoeffSet::band(std::size_t b) const {
  if (b >= band_count()) throw DimensionError("CoeffSet: band index out of range");
  return std::span<const double>(data_).subspan(b * band_size(), band_size());
}

std::size_t CoeffSet::find(const ShearIndex& idx) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), idx);
  if (it == labels_.end() || !(*it == idx)) throw ConfigError("CoeffSet: missing band " + idx.to_string());
  return 1 + static_cast<std::size_t>(it - labels_.begin());
}

std::span<double> CoeffSet::detail(const ShearIndex& idx) { return band(find(idx)); }
std::span<const double> CoeffSet::detail(const ShearIndex& idx) const { return band(find(idx)); }

Volume4 CoeffSet::band_volume(std::size_t b) const {
  auto s = band(b);
  return Volume4(dims_, std::vector<double>(s.begin(), s.end()));
}

void forward_visit(std::span<const double> f, const ShearletSystem& sys, const BandVisitor& visit) {
  const GridDims& dims = sys.dims;
  const std::size_t n = dims.size();
  check_buffer(f.size(), n, "forward");
  const auto& k = simd::kernels();

  std::vector<complex> spectrum(n), scaled(n);
  dft_into(f, dims, spectrum);

  const std::size_t workers = std::max<std::size_t>(thread_count(), 1);
  std::vector<std::vector<complex>> work(workers, std::vector<complex>(n));
  std::vector<std::vector<double>> real(workers, std::vector<double>(n));

  k.scale_spectrum(spectrum.data(), sys.windows.window(0).data(), scaled.data(), n);
  idft_real_into(scaled, dims, real[0]);
  visit(0, real[0]);

  std::size_t band = 1;
  for (int j = 1; j <= sys.config.scales; ++j) {
    k.scale_spectrum(spectrum.data(), sys.windows.window(j).data(), scaled.data(), n);
    const std::size_t count = sys.filters.filter_count(j);
    parallel_for(count, [&](std::size_t b, std::size_t e, std::size_t w) {
      for (std::size_t l = b; l < e; ++l) {
        apply_directional(k, scaled.data(), sys.filters.filter(j, l), work[w].data(), dims);
        idft_real_into(work[w], dims, real[w]);
        visit(band + l, real[w]);
      }
    });
    band += count;
  }
}

void forward_into(std::span<const double> f, const ShearletSystem& sys, std::span<double> coeffs) {
  const std::size_t n = sys.dims.size();
  check_buffer(coeffs.size(), sys.coefficient_count(), "forward");
  forward_visit(f, sys, [&](std::size_t b, std::span<const double> band) {
    std::copy(band.begin(), band.end(), coeffs.begin() + static_cast<std::ptrdiff_t>(b * n));
  });
}

void adjoint_into(std::span<const double> coeffs, const ShearletSystem& sys, std::span<double> out) {
  const GridDims& dims = sys.dims;
  const std::size_t n = dims.size();
  check_buffer(out.size(), n, "adjoint");
  check_buffer(coeffs.size(), sys.coefficient_count(), "adjoint");
  const auto& k = simd::kernels();

  std::vector<complex> total(n, complex(0.0, 0.0)), scale_acc(n);
  std::vector<complex> spectrum(n);
  dft_into(coeffs.subspan(0, n), dims, spectrum);
  k.accumulate_scaled(total.data(), spectrum.data(), sys.windows.window(0).data(), n);

  // Band spectra are computed in parallel batches and accumulated in band
  // order, so the result does not depend on the thread count.
  const std::size_t workers = std::max<std::size_t>(thread_count(), 1);
  std::vector<std::vector<complex>> work(workers, std::vector<complex>(n));
  std::size_t band = 1;
  for (int j = 1; j <= sys.config.scales; ++j) {
    std::fill(scale_acc.begin(), scale_acc.end(), complex(0.0, 0.0));
    const std::size_t count = sys.filters.filter_count(j);
    for (std::size_t start = 0; start < count; start += workers) {
      const std::size_t batch = std::min(workers, count - start);
      parallel_for(batch, [&](std::size_t b, std::size_t e, std::size_t) {
        for (std::size_t i = b; i < e; ++i) dft_into(coeffs.subspan((band + start + i) * n, n), dims, work[i]);
      });
      for (std::size_t i = 0; i < batch; ++i) {
        accumulate_directional(k, scale_acc.data(), work[i].data(), sys.filters.filter(j, start + i), dims);
      }
    }
    k.accumulate_scaled(total.data(), scale_acc.data(), sys.windows.window(j).data(), n);
    band += count;
  }
  idft_real_into(total, dims, out);
}

void inverse_into(std::span<const double> coeffs, const ShearletSystem& sys, std::span<double> out) {
  const GridDims& dims = sys.dims;
  const std::size_t n = dims.size();
  check_buffer(out.size(), n, "inverse");
  check_buffer(coeffs.size(), sys.coefficient_count(), "inverse");
  const auto& k = simd::kernels();

  std::vector<complex> total(n, complex(0.0, 0.0)), spectrum(n);
  dft_into(coeffs.subspan(0, n), dims, spectrum);
  k.accumulate_scaled(total.data(), spectrum.data(), sys.windows.window(0).data(), n);

  std::vector<double> subband(n);
  std::size_t band = 1;
  for (int j = 1; j <= sys.config.scales; ++j) {
    std::fill(subband.begin(), subband.end(), 0.0);
    const std::size_t count = sys.filters.filter_count(j);
    for (std::size_t l = 0; l < count; ++l) k.axpy(1.0, coeffs.data() + (band + l) * n, subband.data(), n);
    dft_into(subband, dims, spectrum);
    k.accumulate_scaled(total.data(), spectrum.data(), sys.windows.window(j).data(), n);
    band += count;
  }
  idft_real_into(total, dims, out);
}

namespace {
void check_labels(const CoeffSet& c, const ShearletSystem& sys, const char* what) {
  require_same_dims(c.dims(), sys.dims, what);
  if (c.labels() != sys.labels) {
    for (const auto& l : sys.labels) {
      if (!std::binary_search(c.labels().begin(), c.labels().end(), l)) {
        throw ConfigError(std::string(what) + ": missing band " + l.to_string());
      }
    }
    throw ConfigError(std::string(what) + ": coefficient bands do not match the system");
  }
}
}  // namespace

CoeffSet forward(const Volume4& f, const ShearletSystem& sys) {
  require_same_dims(f.dims(), sys.dims, "forward");
  CoeffSet c(sys);
  forward_into(f.span(), sys, c.data());
  return c;
}

Volume4 inverse(const CoeffSet& c, const ShearletSystem& sys) {
  check_labels(c, sys, "inverse");
  Volume4 out(sys.dims);
  inverse_into(c.data(), sys, out.span());
  return out;
}

Volume4 adjoint(const CoeffSet& u, const ShearletSystem& sys) {
  check_labels(u, sys, "adjoint");
  Volume4 out(sys.dims);
  adjoint_into(u.data(), sys, out.span());
  return out;
}

std::vector<double> gram_multiplier(const ShearletSystem& sys) {
  const GridDims& dims = sys.dims;
  const std::size_t n = dims.size(), nsp = dims.spatial_size();
  std::vector<double> m(n, 0.0);
  const auto& w0 = sys.windows.window(0);
  for (std::size_t i = 0; i < n; ++i) m[i] = w0[i] * w0[i];
  std::vector<double> vsq(nsp);
  for (int j = 1; j <= sys.config.scales; ++j) {
    std::fill(vsq.begin(), vsq.end(), 0.0);
    for (std::size_t l = 0; l < sys.filters.filter_count(j); ++l) {
      auto v = sys.filters.filter(j, l);
      for (std::size_t q = 0; q < nsp; ++q) vsq[q] += v[q] * v[q];
    }
    const auto& w = sys.windows.window(j);
    for (std::size_t i = 0; i < n; ++i) m[i] += w[i] * w[i] * vsq[i % nsp];
  }
  return m;
}

std::pair<double, double> frame_bounds(const ShearletSystem& sys) {
  const auto m = gram_multiplier(sys);
  const auto [lo, hi] = std::minmax_element(m.begin(), m.end());
  return {*lo, *hi};
}

void write_coefficients(const std::filesystem::path& dir, const CoeffSet& c, const ShearletSystem& sys) {
  check_labels(c, sys, "write_coefficients");
  std::filesystem::create_directories(dir);
  io::json manifest;
  const auto& d = sys.dims;
  manifest["dims"] = {d.n1, d.n2, d.n3, d.n4};
  manifest["scales"] = sys.config.scales;
  manifest["shear_radii"] = sys.config.shear_radii;
  manifest["layout"] = layout_name(sys.config.layout);
  manifest["mode"] = mode_name(sys.mode);
  manifest["coarse"] = "coarse.f32";
  io::write_f32(dir / "coarse.f32", c.coarse());
  io::json bands = io::json::array();
  for (std::size_t b = 1; b < c.band_count(); ++b) {
    const auto& l = c.labels()[b - 1];
    const std::string file = "band_" + l.to_string() + ".f32";
    io::write_f32(dir / file, c.band(b));
    bands.push_back({{"j", l.j}, {"d", l.d}, {"l1", l.l1}, {"l2", l.l2}, {"file", file}});
  }
  manifest["bands"] = bands;
  io::write_json(dir / "manifest.json", manifest);
}

ShearletSystem read_coefficient_system(const std::filesystem::path& dir) {
  const auto m = io::read_json(dir / "manifest.json");
  try {
    const auto dims = m.at("dims").get<std::vector<std::size_t>>();
    if (dims.size() != 4) throw ConfigError("read_coefficient_system: dims must have 4 entries");
    ShearConfig cfg;
    cfg.scales = m.at("scales").get<int>();
    cfg.shear_radii = m.at("shear_radii").get<std::vector<int>>();
    const auto layout = m.at("layout").get<std::string>();
    if (layout != "odd" && layout != "even") throw ConfigError("read_coefficient_system: unknown layout " + layout);
    cfg.layout = layout == "odd" ? WedgeLayout::Odd : WedgeLayout::Even;
    const auto mode = m.at("mode").get<std::string>();
    if (mode != "cylindrical4d" && mode != "spatial3d") throw ConfigError("read_coefficient_system: unknown mode " + mode);
    return build_system(GridDims(dims[0], dims[1], dims[2], dims[3]), cfg,
                        mode == "spatial3d" ? WindowMode::Spatial3D : WindowMode::Cylindrical4D);
  } catch (const io::json::exception& e) {
    throw ConfigError("read_coefficient_system: malformed manifest in " + dir.string() + ": " + e.what());
  }
}

CoeffSet read_coefficients(const std::filesystem::path& dir, const ShearletSystem& sys) {
  const auto manifest = io::read_json(dir / "manifest.json");
  const auto& d = sys.dims;
  if (manifest.at("dims") != io::json({d.n1, d.n2, d.n3, d.n4})) {
    throw DimensionError("read_coefficients: manifest dims do not match the system");
  }
  std::map<ShearIndex, std::string> files;
  for (const auto& b : manifest.at("bands")) {
    files[{b.at("j").get<int>(), b.at("d").get<int>(), b.at("l1").get<int>(), b.at("l2").get<int>()}] =
        b.at("file").get<std::string>();
  }
  CoeffSet c(sys);
  const auto coarse = io::read_f32(dir / manifest.at("coarse").get<std::string>(), d.size());
  std::copy(coarse.begin(), coarse.end(), c.coarse().begin());
  for (std::size_t b = 1; b < c.band_count(); ++b) {
    const auto& l = sys.labels[b - 1];
    auto it = files.find(l);
    if (it == files.end()) throw ConfigError("read_coefficients: manifest lacks band " + l.to_string());
    const auto v = io::read_f32(dir / it->second, d.size());
    std::copy(v.begin(), v.end(), c.band(b).begin());
  }
  return c;
}

}  // namespace cylsh
