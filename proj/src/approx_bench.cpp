#include "cylshear/approx_bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "cylshear/dwt4.hpp"

namespace cylsh {

std::string to_string(ApproxKind k) { return k == ApproxKind::Cylsh ? "cylsh" : "dwt4"; }

ApproxKind approx_kind_from_string(const std::string& s) {
  if (s == "cylsh") return ApproxKind::Cylsh;
  if (s == "dwt4") return ApproxKind::Dwt4;
  throw ConfigError("unknown transform '" + s + "' (expected cylsh or dwt4)");
}

CoefficientTransform shearlet_transform(std::shared_ptr<const ShearletSystem> sys) {
  CoefficientTransform t;
  t.name = "cylsh";
  t.signal_size = sys->dims.size();
  t.coefficient_count = sys->coefficient_count();
  t.lowpass_count = sys->dims.size();
  t.forward = [sys](std::span<const double> f, std::span<double> c) { forward_into(f, *sys, c); };
  t.inverse = [sys](std::span<const double> c, std::span<double> f) { inverse_into(c, *sys, f); };
  return t;
}

CoefficientTransform wavelet_transform(const GridDims& dims, int levels) {
  CoefficientTransform t;
  t.name = "dwt4";
  t.signal_size = t.coefficient_count = dims.size();
  t.lowpass_count = dims.size() >> (4 * levels);
  t.forward = [dims, levels](std::span<const double> f, std::span<double> c) { dwt4_forward_into(f, dims, levels, c); };
  t.inverse = [dims, levels](std::span<const double> c, std::span<double> f) { dwt4_inverse_into(c, dims, levels, f); };
  return t;
}

CoefficientTransform spatial_wavelet_transform(const GridDims& dims, int levels) {
  CoefficientTransform t;
  t.name = "dwt3";
  t.signal_size = t.coefficient_count = dims.size();
  t.lowpass_count = dims.size() >> (3 * levels);
  t.forward = [dims, levels](std::span<const double> f, std::span<double> c) { dwt3_forward_into(f, dims, levels, c); };
  t.inverse = [dims, levels](std::span<const double> c, std::span<double> f) { dwt3_inverse_into(c, dims, levels, f); };
  return t;
}

ShearConfig approx_shear_config(const GridDims& dims, const ApproxOptions& opt) {
  if (!opt.shear_auto) return opt.shear;
  return default_shear_config(dims);
}

int approx_wavelet_levels(const GridDims& dims, const ApproxOptions& opt) {
  if (opt.wavelet_levels > 0) return opt.wavelet_levels;
  const int levels = std::min(dwt4_max_levels(dims), 4);
  if (levels < 1) throw DimensionError("approx: grid " + dims.to_string() + " admits no wavelet level");
  return levels;
}

CoefficientTransform make_transform(ApproxKind kind, const GridDims& dims, const ApproxOptions& opt) {
  if (kind == ApproxKind::Dwt4) return wavelet_transform(dims, approx_wavelet_levels(dims, opt));
  return shearlet_transform(std::make_shared<const ShearletSystem>(build_system(dims, approx_shear_config(dims, opt))));
}

std::vector<std::uint32_t> magnitude_order(std::span<const double> c) {
  if (c.size() > std::numeric_limits<std::uint32_t>::max()) throw DimensionError("approx: too many coefficients");
  std::vector<std::uint32_t> idx(c.size());
  std::iota(idx.begin(), idx.end(), 0u);
  std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
    const double ma = std::abs(c[a]), mb = std::abs(c[b]);
    return ma != mb ? ma > mb : a < b;
  });
  return idx;
}

namespace {

// Candidate coefficients for selection: all, or the detail part only.
struct Selection {
  std::size_t retained = 0;
  std::vector<std::uint32_t> order;  // indices into the full buffer
};

Selection select(std::span<const double> c, const CoefficientTransform& t, bool retain_lowpass) {
  Selection s;
  s.retained = retain_lowpass ? t.lowpass_count : 0;
  s.order = magnitude_order(c.subspan(s.retained));
  for (auto& i : s.order) i += static_cast<std::uint32_t>(s.retained);
  return s;
}

void keep_first(std::span<const double> c, const Selection& s, std::size_t n, std::vector<double>& kept) {
  std::fill(kept.begin(), kept.end(), 0.0);
  std::copy(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(s.retained), kept.begin());
  for (std::size_t k = 0; k < n; ++k) kept[s.order[k]] = c[s.order[k]];
}

void check_n(std::size_t n, const CoefficientTransform& t, bool retain_lowpass) {
  const std::size_t avail = t.coefficient_count - (retain_lowpass ? t.lowpass_count : 0);
  if (n > avail) {
    throw ConfigError("approx: N = " + std::to_string(n) + " exceeds the " + std::to_string(avail) +
                      " selectable coefficients of " + t.name);
  }
}

}  // namespace

std::vector<double> n_term_approx(std::span<const double> f, const CoefficientTransform& t, std::size_t n,
                                  bool retain_lowpass) {
  if (f.size() != t.signal_size) throw DimensionError("approx: signal size mismatch");
  check_n(n, t, retain_lowpass);
  std::vector<double> out(t.signal_size, 0.0);
  if (n == 0 && !retain_lowpass) return out;
  std::vector<double> c(t.coefficient_count), kept(t.coefficient_count);
  t.forward(f, c);
  keep_first(c, select(c, t, retain_lowpass), n, kept);
  t.inverse(kept, out);
  return out;
}

Volume4 n_term_approx(const Volume4& f, ApproxKind kind, std::size_t n, const ApproxOptions& opt) {
  return Volume4(f.dims(),
                 n_term_approx(f.span(), make_transform(kind, f.dims(), opt), n, opt.retain_lowpass));
}

std::vector<std::size_t> geometric_ladder(std::size_t first, std::size_t last, std::size_t points) {
  if (points < 3) throw ConfigError("approx: the N ladder needs at least 3 points");
  if (first < 1 || last <= first) throw ConfigError("approx: the N ladder needs 1 <= first < last");
  if (last - first + 1 < points) throw ConfigError("approx: the N ladder has more points than integers in range");
  std::vector<std::size_t> out;
  const double r = std::log(static_cast<double>(last) / static_cast<double>(first)) / static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) {
    auto v = static_cast<std::size_t>(std::llround(static_cast<double>(first) * std::exp(r * static_cast<double>(k))));
    if (k + 1 == points) v = last;
    if (!out.empty()) v = std::max(v, out.back() + 1);
    out.push_back(v);
  }
  return out;
}

void fit_decay(DecayCurve& curve) {
  const std::size_t m = curve.n.size();
  if (m < 3 || curve.error2.size() != m) throw ConfigError("approx: a decay curve needs at least 3 points");
  curve.fit_from = m / 3;
  std::vector<double> x, y;
  for (std::size_t k = curve.fit_from; k < m; ++k) {
    if (curve.error2[k] <= 0.0) continue;
    x.push_back(std::log(static_cast<double>(curve.n[k])));
    y.push_back(std::log(curve.error2[k]));
  }
  if (x.size() < 2) throw NumericalError("approx: fewer than two positive errors in the fit range of " + curve.transform);
  const double k = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / k;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  curve.slope = sxy / sxx;
  curve.intercept = my - curve.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (curve.intercept + curve.slope * x[i]);
    ss += e * e;
  }
  curve.residual = std::sqrt(ss / k);
}

DecayCurve decay_curve(std::span<const double> f, const CoefficientTransform& t, const std::vector<std::size_t>& ladder,
                       bool retain_lowpass) {
  if (f.size() != t.signal_size) throw DimensionError("approx: signal size mismatch");
  if (ladder.size() < 3) throw ConfigError("approx: the N ladder needs at least 3 points");
  for (std::size_t k = 1; k < ladder.size(); ++k)
    if (ladder[k] <= ladder[k - 1]) throw ConfigError("approx: the N ladder must be strictly increasing");
  check_n(ladder.back(), t, retain_lowpass);

  DecayCurve curve;
  curve.transform = t.name;
  std::vector<double> c(t.coefficient_count), kept(t.coefficient_count), g(t.signal_size);
  t.forward(f, c);
  const auto sel = select(c, t, retain_lowpass);
  for (std::size_t n : ladder) {
    keep_first(c, sel, n, kept);
    t.inverse(kept, g);
    double e = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) e += (f[i] - g[i]) * (f[i] - g[i]);
    curve.n.push_back(n);
    curve.error2.push_back(e);
  }
  fit_decay(curve);
  return curve;
}

const DecayCurve& DecayReport::curve(const std::string& transform) const {
  for (const auto& c : curves)
    if (c.transform == transform) return c;
  throw ConfigError("approx: no curve for " + transform);
}

std::string DecayReport::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "transform,N,error2\n";
  for (const auto& c : curves)
    for (std::size_t k = 0; k < c.n.size(); ++k) os << c.transform << ',' << c.n[k] << ',' << c.error2[k] << '\n';
  return os.str();
}

io::json DecayReport::slopes_json() const {
  io::json j;
  j["dims"] = {dims.n1, dims.n2, dims.n3, dims.n4};
  for (const auto& c : curves) {
    j["curves"][c.transform] = {{"slope", c.slope},
                                {"intercept", c.intercept},
                                {"residual", c.residual},
                                {"fit_from_N", c.n[c.fit_from]},
                                {"points", c.n.size()}};
  }
  if (curves.size() == 2) j["slope_difference"] = curves[0].slope - curves[1].slope;
  return j;
}

DecayReport decay_experiment(const CartoonSpec& spec, const GridDims& dims, const std::vector<std::size_t>& ladder,
                             const ApproxOptions& opt) {
  const auto f = render_cartoon(spec, dims);
  DecayReport r;
  r.dims = dims;
  for (ApproxKind k : {ApproxKind::Cylsh, ApproxKind::Dwt4})
    r.curves.push_back(decay_curve(f.span(), make_transform(k, dims, opt), ladder, opt.retain_lowpass));
  return r;
}

}  // namespace cylsh
