#include <doctest.h>

#include <cmath>

#include "cylshear/approx_bench.hpp"
#include "cylshear/dwt4.hpp"
#include "oracles.hpp"

using namespace cylsh;

namespace {

double err2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

ApproxOptions small_shear() {
  ApproxOptions o;
  o.shear_auto = false;
  o.shear.scales = 1;
  o.shear.shear_radii = {1};
  return o;
}

}  // namespace

TEST_CASE("magnitude order breaks ties by index") {
  const std::vector<double> c{0.5, -2.0, 2.0, 0.0, -0.5, 1.0};
  const auto o = magnitude_order(c);
  CHECK(o == std::vector<std::uint32_t>{1, 2, 5, 0, 4, 3});
}

TEST_CASE("N = 0 is zero, N = all is exact, N too large is rejected") {
  const GridDims d(16, 16, 16, 4);
  const auto f = oracle::random_volume(d, 3);
  for (ApproxKind k : {ApproxKind::Cylsh, ApproxKind::Dwt4}) {
    const auto t = make_transform(k, d, small_shear());
    CHECK(oracle::max_abs(n_term_approx(f.span(), t, 0)) == 0.0);
    const auto full = n_term_approx(f.span(), t, t.coefficient_count);
    CHECK(oracle::max_abs_diff(full, f.data()) <= 1e-8 * oracle::max_abs(f.data()));
    CHECK_THROWS_AS(n_term_approx(f.span(), t, t.coefficient_count + 1), ConfigError);
  }
}

TEST_CASE("dwt4 represents a constant with one coefficient") {
  const GridDims d(16, 16, 16, 16);
  const Volume4 f(d, 0.7);
  const auto g = n_term_approx(f, ApproxKind::Dwt4, 1);
  CHECK(oracle::max_abs_diff(g.data(), f.data()) <= 1e-12);
}

TEST_CASE("dwt4 error equals the discarded coefficient energy") {
  const GridDims d(16, 16, 16, 8);
  const auto f = oracle::random_volume(d, 4);
  const int levels = 3;
  std::vector<double> c(d.size());
  dwt4_forward_into(f.span(), d, levels, c);
  const auto order = magnitude_order(c);
  const auto t = wavelet_transform(d, levels);
  for (std::size_t n : {1, 100, 5000, 30000}) {
    double discarded = 0.0;
    for (std::size_t k = n; k < order.size(); ++k) discarded += c[order[k]] * c[order[k]];
    const auto g = n_term_approx(f.span(), t, n);
    CHECK(err2(f.span(), g) == doctest::Approx(discarded).epsilon(1e-10));
  }
}

TEST_CASE("errors are non-increasing over the full ladder on 16^4") {
  const GridDims d(16, 16, 16, 16);
  const auto f = oracle::random_volume(d, 5);
  for (ApproxKind k : {ApproxKind::Cylsh, ApproxKind::Dwt4}) {
    const auto t = make_transform(k, d, small_shear());
    const auto curve = decay_curve(f.span(), t, geometric_ladder(1, t.coefficient_count, 40));
    const double energy = oracle::dot(f.data(), f.data());
    // The shearlet synthesis is a left inverse, not an orthogonal projection,
    // so a single added coefficient may raise the error slightly.
    const double slack = k == ApproxKind::Dwt4 ? 1e-12 : 1e-4 * energy;
    for (std::size_t i = 1; i < curve.n.size(); ++i) CHECK(curve.error2[i] <= curve.error2[i - 1] + slack);
    CHECK(curve.error2.front() > 0.9 * energy);
    CHECK(curve.error2.back() <= 1e-16 * energy);
  }
}

TEST_CASE("retaining the lowpass band") {
  const GridDims d(16, 16, 16, 4);
  const auto f = oracle::random_volume(d, 6);
  for (ApproxKind k : {ApproxKind::Cylsh, ApproxKind::Dwt4}) {
    const auto t = make_transform(k, d, small_shear());
    std::vector<double> c(t.coefficient_count), lowpass_only(t.coefficient_count, 0.0), ref(d.size());
    t.forward(f.span(), c);
    std::copy(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(t.lowpass_count), lowpass_only.begin());
    t.inverse(lowpass_only, ref);
    CHECK(oracle::max_abs_diff(n_term_approx(f.span(), t, 0, true), ref) == 0.0);
    CHECK_THROWS_AS(n_term_approx(f.span(), t, t.coefficient_count - t.lowpass_count + 1, true), ConfigError);
    const auto all = n_term_approx(f.span(), t, t.coefficient_count - t.lowpass_count, true);
    CHECK(oracle::max_abs_diff(all, f.data()) <= 1e-8 * oracle::max_abs(f.data()));
  }
}

TEST_CASE("ladders and slope fits") {
  CHECK(geometric_ladder(256, 65536, 9) ==
        std::vector<std::size_t>{256, 512, 1024, 2048, 4096, 8192, 16384, 32768, 65536});
  CHECK_THROWS_AS(geometric_ladder(256, 65536, 2), ConfigError);
  CHECK_THROWS_AS(geometric_ladder(10, 10, 5), ConfigError);
  CHECK_THROWS_AS(geometric_ladder(1, 4, 10), ConfigError);
  const auto dense = geometric_ladder(1, 1000, 30);
  CHECK(dense.size() == 30);
  CHECK(dense.front() == 1);
  CHECK(dense.back() == 1000);
  for (std::size_t k = 1; k < dense.size(); ++k) CHECK(dense[k] > dense[k - 1]);

  // Exact power law after the first third; the first third is ignored.
  DecayCurve c;
  c.transform = "synthetic";
  for (std::size_t k = 0; k < 9; ++k) {
    const double n = std::pow(2.0, 4.0 + double(k));
    c.n.push_back(static_cast<std::size_t>(n));
    c.error2.push_back(k < 3 ? 1e6 * double(k + 1) : 3.0 * std::pow(n, -1.5));
  }
  fit_decay(c);
  CHECK(c.fit_from == 3);
  CHECK(c.slope == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(std::exp(c.intercept) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(c.residual <= 1e-12);

  DecayCurve one{"x", {4}, {1.0}};
  CHECK_THROWS_AS(fit_decay(one), ConfigError);
  const GridDims d(16, 16, 16, 4);
  const auto f = oracle::random_volume(d, 7);
  const auto t = wavelet_transform(d, 2);
  CHECK_THROWS_AS(decay_curve(f.span(), t, {4, 8}), ConfigError);
  CHECK_THROWS_AS(decay_curve(f.span(), t, {4, 8, 8}), ConfigError);
}

TEST_CASE("smooth input: steep wavelet decay, negligible fine-scale shearlet energy") {
  const GridDims d(32, 32, 32, 8);
  const auto r = decay_experiment(smooth_cartoon(), d, geometric_ladder(256, 65536, 9));
  REQUIRE(r.curves.size() == 2);
  MESSAGE("cylsh slope " << r.curve("cylsh").slope << ", dwt4 slope " << r.curve("dwt4").slope);
  CHECK(r.curve("dwt4").slope < -1.5);
  CHECK(r.curve("cylsh").slope < 0.0);

  const auto sys = build_system(d, approx_shear_config(d, {}));
  auto finest_energy = [&](const CartoonSpec& spec) {
    const auto c = forward(render_cartoon(spec, d), sys);
    double e = 0.0;
    for (std::size_t b = 1; b < c.band_count(); ++b)
      if (c.labels()[b - 1].j == sys.config.scales)
        for (double v : c.band(b)) e += v * v;
    return e;
  };
  const double smooth = finest_energy(smooth_cartoon()), cartoon = finest_energy(default_cartoon());
  MESSAGE("finest-scale energy smooth " << smooth << ", cartoon " << cartoon);
  CHECK(smooth < 1e-2 * cartoon);
}

TEST_CASE("time-constant input orders the transforms like the per-frame 3D transforms") {
  const GridDims d(32, 32, 32, 4);
  auto spec = default_cartoon();
  spec.g0 = TemporalBump{1.0, 0.0, 0.5, 0.5};
  spec.g1 = TemporalBump{1.0, 0.0, 0.5, 0.5};
  const auto f = render_cartoon(spec, d);
  for (std::size_t i = 0; i < d.spatial_size(); ++i) REQUIRE(f[i] == f[3 * d.spatial_size() + i]);

  ApproxOptions opt;
  const auto cfg = approx_shear_config(d, opt);
  const auto ladder = geometric_ladder(64, 16384, 9);
  const int levels = 2;
  const auto sh4 = decay_curve(f.span(), shearlet_transform(std::make_shared<const ShearletSystem>(build_system(d, cfg))), ladder);
  const auto sh3 = decay_curve(
      f.span(),
      shearlet_transform(std::make_shared<const ShearletSystem>(build_system(d, cfg, WindowMode::Spatial3D))),
      ladder);
  const auto w4 = decay_curve(f.span(), wavelet_transform(d, levels), ladder);
  const auto w3 = decay_curve(f.span(), spatial_wavelet_transform(d, levels), ladder);
  for (std::size_t k = 0; k < ladder.size(); ++k)
    CHECK((sh4.error2[k] < w4.error2[k]) == (sh3.error2[k] < w3.error2[k]));
  CHECK((sh4.slope < w4.slope) == (sh3.slope < w3.slope));
}

TEST_CASE("report formats") {
  DecayReport r;
  r.dims = GridDims(4, 4, 4, 4);
  DecayCurve a{"cylsh", {1, 2, 4}, {1.0, 0.5, 0.25}};
  DecayCurve b{"dwt4", {1, 2, 4}, {1.0, 0.25, 0.0625}};
  fit_decay(a);
  fit_decay(b);
  r.curves = {a, b};
  const auto csv = r.to_csv();
  CHECK(csv.rfind("transform,N,error2\ncylsh,1,1\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  const auto j = r.slopes_json();
  CHECK(j["curves"]["cylsh"]["slope"].get<double>() == doctest::Approx(-1.0));
  CHECK(j["curves"]["dwt4"]["slope"].get<double>() == doctest::Approx(-2.0));
  CHECK(j["slope_difference"].get<double>() == doctest::Approx(1.0));
  CHECK(&r.curve("dwt4") == &r.curves[1]);
  CHECK_THROWS_AS(r.curve("none"), ConfigError);
}

TEST_CASE("transform names parse") {
  CHECK(approx_kind_from_string("cylsh") == ApproxKind::Cylsh);
  CHECK(approx_kind_from_string(to_string(ApproxKind::Dwt4)) == ApproxKind::Dwt4);
  CHECK_THROWS_AS(approx_kind_from_string("haar"), ConfigError);
}
