#include "cylshear/dwt4.hpp"

#include "cylshear/io.hpp"
#include "cylshear/parallel.hpp"

namespace cylsh {

namespace {

// `axes` is 4 for the full transform, 3 for the spatial-only variant.
GridDims shrink(const GridDims& d, int levels, int axes = 4) {
  const std::size_t s = std::size_t{1} << levels;
  return {d.n1 / s, d.n2 / s, d.n3 / s, axes == 4 ? d.n4 / s : d.n4};
}

void check_levels(const GridDims& dims, int levels, int axes = 4) {
  validate(dims);
  if (levels < 1) throw ConfigError("dwt4: level count must be >= 1");
  const std::size_t s = std::size_t{1} << levels;
  for (int a = 0; a < axes; ++a) {
    if (dims[a] % s != 0) {
      throw DimensionError("dwt4: axis " + std::to_string(a + 1) + " length " + std::to_string(dims[a]) +
                           " is not divisible by 2^" + std::to_string(levels));
    }
  }
}

// Lines along `axis` of the box `box` inside the array `full`.
struct LineSet {
  std::size_t count, length, stride;
  std::vector<std::size_t> starts;
};

LineSet lines(const GridDims& full, const GridDims& box, int axis) {
  const auto n = full.as_array();
  const auto b = box.as_array();
  std::array<std::size_t, 4> stride{1, n[0], n[0] * n[1], n[0] * n[1] * n[2]};
  LineSet ls{0, b[static_cast<std::size_t>(axis)], stride[static_cast<std::size_t>(axis)], {}};
  std::array<std::size_t, 4> lim = b;
  lim[static_cast<std::size_t>(axis)] = 1;
  for (std::size_t i4 = 0; i4 < lim[3]; ++i4)
    for (std::size_t i3 = 0; i3 < lim[2]; ++i3)
      for (std::size_t i2 = 0; i2 < lim[1]; ++i2)
        for (std::size_t i1 = 0; i1 < lim[0]; ++i1)
          ls.starts.push_back(i1 * stride[0] + i2 * stride[1] + i3 * stride[2] + i4 * stride[3]);
  ls.count = ls.starts.size();
  return ls;
}

// One periodic analysis step: x -> [lo | hi].
void analyze(const double* x, double* out, std::size_t m) {
  const std::size_t half = m / 2;
  for (std::size_t k = 0; k < half; ++k) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t t = 0; t < 4; ++t) {
      const double v = x[(2 * k + t) % m];
      lo += kDb2Lowpass[t] * v;
      hi += kDb2Highpass[t] * v;
    }
    out[k] = lo;
    out[half + k] = hi;
  }
}

// Transpose of analyze().
void synthesize(const double* c, double* x, std::size_t m) {
  const std::size_t half = m / 2;
  std::fill(x, x + m, 0.0);
  for (std::size_t k = 0; k < half; ++k)
    for (std::size_t t = 0; t < 4; ++t) x[(2 * k + t) % m] += kDb2Lowpass[t] * c[k] + kDb2Highpass[t] * c[half + k];
}

template <class Step>
void pass(std::vector<double>& a, const GridDims& full, const GridDims& box, int axis, Step step) {
  const auto ls = lines(full, box, axis);
  parallel_for(ls.count, [&](std::size_t begin, std::size_t end, std::size_t) {
    std::vector<double> in(ls.length), out(ls.length);
    for (std::size_t l = begin; l < end; ++l) {
      const std::size_t s = ls.starts[l];
      for (std::size_t i = 0; i < ls.length; ++i) in[i] = a[s + i * ls.stride];
      step(in.data(), out.data(), ls.length);
      for (std::size_t i = 0; i < ls.length; ++i) a[s + i * ls.stride] = out[i];
    }
  });
}

// Copies between the in-place (Mallat) arrangement and the canonical flat
// layout. `to_flat` selects the direction.
void reorder(std::vector<double>& mallat, std::span<double> flat, const GridDims& dims, int levels, bool to_flat,
             int axes = 4) {
  std::size_t pos = 0;
  auto copy_block = [&](const GridDims& sub, std::array<std::size_t, 4> origin) {
    for (std::size_t i4 = 0; i4 < sub.n4; ++i4)
      for (std::size_t i3 = 0; i3 < sub.n3; ++i3)
        for (std::size_t i2 = 0; i2 < sub.n2; ++i2)
          for (std::size_t i1 = 0; i1 < sub.n1; ++i1, ++pos) {
            const std::size_t q = dims.index(origin[0] + i1, origin[1] + i2, origin[2] + i3, origin[3] + i4);
            if (to_flat)
              flat[pos] = mallat[q];
            else
              mallat[q] = flat[pos];
          }
  };
  copy_block(shrink(dims, levels, axes), {0, 0, 0, 0});
  for (int level = levels; level >= 1; --level) {
    const GridDims sub = shrink(dims, level, axes);
    const auto s = sub.as_array();
    for (int o = 1; o < (1 << axes); ++o) {
      std::array<std::size_t, 4> origin{};
      for (int a = 0; a < axes; ++a) origin[static_cast<std::size_t>(a)] = (o >> a) & 1 ? s[static_cast<std::size_t>(a)] : 0;
      copy_block(sub, origin);
    }
  }
}

}  // namespace

GridDims WaveletCoeffs::level_dims(int level) const { return shrink(dims, level); }

std::size_t WaveletCoeffs::offset(int level, int orientation) const {
  if (level < 1 || level > levels || orientation < 1 || orientation > 15) {
    throw ConfigError("dwt4: no band at level " + std::to_string(level) + ", orientation " +
                      std::to_string(orientation));
  }
  std::size_t pos = shrink(dims, levels).size();
  for (int l = levels; l > level; --l) pos += 15 * shrink(dims, l).size();
  return pos + static_cast<std::size_t>(orientation - 1) * shrink(dims, level).size();
}

std::span<double> WaveletCoeffs::approximation() {
  return std::span<double>(data).subspan(0, shrink(dims, levels).size());
}
std::span<const double> WaveletCoeffs::approximation() const {
  return std::span<const double>(data).subspan(0, shrink(dims, levels).size());
}
std::span<double> WaveletCoeffs::detail(int level, int orientation) {
  return std::span<double>(data).subspan(offset(level, orientation), shrink(dims, level).size());
}
std::span<const double> WaveletCoeffs::detail(int level, int orientation) const {
  return std::span<const double>(data).subspan(offset(level, orientation), shrink(dims, level).size());
}

int dwt4_max_levels(const GridDims& dims) {
  int levels = 0;
  while (true) {
    const std::size_t s = std::size_t{1} << (levels + 1);
    if (dims.n1 % s || dims.n2 % s || dims.n3 % s || dims.n4 % s) return levels;
    ++levels;
  }
}

namespace {

void forward_axes(std::span<const double> f, const GridDims& dims, int levels, std::span<double> out, int axes) {
  check_levels(dims, levels, axes);
  if (f.size() != dims.size() || out.size() != dims.size()) throw DimensionError("dwt4_forward: buffer size mismatch");
  std::vector<double> a(f.begin(), f.end());
  for (int level = 1; level <= levels; ++level) {
    const GridDims box = shrink(dims, level - 1, axes);
    for (int axis = 0; axis < axes; ++axis) pass(a, dims, box, axis, analyze);
  }
  reorder(a, out, dims, levels, true, axes);
}

void inverse_axes(std::span<const double> c, const GridDims& dims, int levels, std::span<double> out, int axes) {
  check_levels(dims, levels, axes);
  if (c.size() != dims.size() || out.size() != dims.size()) throw DimensionError("dwt4_inverse: buffer size mismatch");
  std::vector<double> a(dims.size());
  std::vector<double> flat(c.begin(), c.end());
  reorder(a, flat, dims, levels, false, axes);
  for (int level = levels; level >= 1; --level) {
    const GridDims box = shrink(dims, level - 1, axes);
    for (int axis = axes - 1; axis >= 0; --axis) pass(a, dims, box, axis, synthesize);
  }
  std::copy(a.begin(), a.end(), out.begin());
}

}  // namespace

void dwt4_forward_into(std::span<const double> f, const GridDims& dims, int levels, std::span<double> out) {
  forward_axes(f, dims, levels, out, 4);
}

void dwt4_inverse_into(std::span<const double> c, const GridDims& dims, int levels, std::span<double> out) {
  inverse_axes(c, dims, levels, out, 4);
}

int dwt3_max_levels(const GridDims& dims) {
  int levels = 0;
  while (true) {
    const std::size_t s = std::size_t{1} << (levels + 1);
    if (dims.n1 % s || dims.n2 % s || dims.n3 % s) return levels;
    ++levels;
  }
}

void dwt3_forward_into(std::span<const double> f, const GridDims& dims, int levels, std::span<double> out) {
  forward_axes(f, dims, levels, out, 3);
}

void dwt3_inverse_into(std::span<const double> c, const GridDims& dims, int levels, std::span<double> out) {
  inverse_axes(c, dims, levels, out, 3);
}


WaveletCoeffs dwt4_forward(const Volume4& f, int levels) {
  WaveletCoeffs c{f.dims(), levels, std::vector<double>(f.size())};
  dwt4_forward_into(f.span(), f.dims(), levels, c.data);
  return c;
}

Volume4 dwt4_inverse(const WaveletCoeffs& c) {
  if (c.data.size() != c.dims.size()) {
    throw DimensionError("dwt4_inverse: " + std::to_string(c.data.size()) + " coefficients for grid " +
                         c.dims.to_string());
  }
  Volume4 out(c.dims);
  dwt4_inverse_into(c.data, c.dims, c.levels, out.span());
  return out;
}

void write_wavelet(const std::filesystem::path& dir, const WaveletCoeffs& c) {
  std::filesystem::create_directories(dir);
  io::write_f32(dir / "coefficients.f32", c.data);
  io::json m;
  m["transform"] = "dwt4-db2-periodic";
  m["dims"] = {c.dims.n1, c.dims.n2, c.dims.n3, c.dims.n4};
  m["levels"] = c.levels;
  m["layout"] = "approximation, then levels coarse-to-fine x orientations 1..15";
  m["file"] = "coefficients.f32";
  io::write_json(dir / "manifest.json", m);
}

WaveletCoeffs read_wavelet(const std::filesystem::path& dir) {
  const auto m = io::read_json(dir / "manifest.json");
  try {
    const auto d = m.at("dims");
    WaveletCoeffs c;
    c.dims = GridDims(d.at(0).get<std::size_t>(), d.at(1).get<std::size_t>(), d.at(2).get<std::size_t>(),
                      d.at(3).get<std::size_t>());
    c.levels = m.at("levels").get<int>();
    check_levels(c.dims, c.levels);
    c.data = io::read_f32(dir / m.at("file").get<std::string>(), c.dims.size());
    return c;
  } catch (const io::json::exception& e) {
    throw ConfigError("dwt4 manifest " + (dir / "manifest.json").string() + ": " + e.what());
  }
}

}  // namespace cylsh
