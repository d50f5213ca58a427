#include <doctest.h>

#include <numbers>

#include "cylshear/pyramid.hpp"
#include "oracles.hpp"

using namespace cylsh;

namespace {

double max_partition_error(const WindowBank& wb) {
  double err = 0.0;
  for (std::size_t i = 0; i < wb.dims.size(); ++i) {
    double s = 0.0;
    for (int j = 0; j <= wb.scales; ++j) s += wb.window(j)[i] * wb.window(j)[i];
    err = std::max(err, std::abs(s - 1.0));
  }
  return err;
}

double radius(const GridDims& d, std::size_t i1, std::size_t i2, std::size_t i3, std::size_t i4, WindowMode mode) {
  double r = std::max({std::abs(normalized_frequency(i1, d.n1)), std::abs(normalized_frequency(i2, d.n2)),
                       std::abs(normalized_frequency(i3, d.n3))});
  if (mode == WindowMode::Cylindrical4D) r = std::max(r, std::abs(normalized_frequency(i4, d.n4)));
  return r;
}

}  // namespace

TEST_CASE("Meyer ramp and lowpass profile") {
  using namespace profile;
  CHECK(meyer_ramp(-1.0) == 0.0);
  CHECK(meyer_ramp(2.0) == 1.0);
  for (double s = 0.0; s <= 1.0; s += 0.05) CHECK(meyer_ramp(s) + meyer_ramp(1.0 - s) == doctest::Approx(1.0));
  CHECK(lowpass(0.5) == 1.0);
  CHECK(lowpass(-0.25) == 1.0);
  CHECK(lowpass(1.0) == 0.0);
  CHECK(lowpass(0.75) == doctest::Approx(std::cos(std::numbers::pi / 4)));
}

TEST_CASE("squared windows partition unity on every grid point") {
  const GridDims grids[] = {{16, 16, 16, 16}, {32, 32, 32, 8}, {64, 64, 16, 8}, {8, 8, 8, 2}, {48, 48, 48, 4}};
  for (const auto& d : grids) {
    for (int j = 1; j <= max_scales(d); ++j) {
      for (auto mode : {WindowMode::Cylindrical4D, WindowMode::Spatial3D}) {
        const auto wb = build_windows(d, j, mode);
        CHECK(max_partition_error(wb) <= 1e-10);
        CHECK(wb.window(0)[0] == 1.0);
        for (int s = 1; s <= j; ++s) CHECK(wb.window(s)[0] == 0.0);
        for (const auto& w : wb.windows)
          for (double x : w) CHECK_FALSE(x < 0.0);
      }
    }
  }
}

TEST_CASE("too many scales is rejected with the feasible maximum") {
  const GridDims d(16, 16, 16, 4);
  CHECK(max_scales(d) == 2);
  try {
    build_windows(d, 3);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("maximum feasible is 2") != std::string::npos);
  }
  CHECK_THROWS_AS(build_windows(d, 0), ConfigError);
}

TEST_CASE("window supports lie inside their coronae (32^4, J=3, exhaustive)") {
  const GridDims d(32, 32, 32, 32);
  const auto wb = build_windows(d, 3);
  std::size_t violations = 0;
  for (std::size_t i4 = 0; i4 < d.n4; ++i4)
    for (std::size_t i3 = 0; i3 < d.n3; ++i3)
      for (std::size_t i2 = 0; i2 < d.n2; ++i2)
        for (std::size_t i1 = 0; i1 < d.n1; ++i1) {
          const double r = radius(d, i1, i2, i3, i4, wb.mode);
          const std::size_t p = d.index(i1, i2, i3, i4);
          for (int j = 0; j <= wb.scales; ++j) {
            const double w = wb.window(j)[p];
            if (w != 0.0 && (r < wb.inner_radius(j) - 1e-15 || r >= wb.outer_radius(j))) ++violations;
            if (j >= 1 && r <= wb.inner_radius(j) && w != 0.0) ++violations;
          }
        }
  CHECK(violations == 0);
}

TEST_CASE("decompose: zero input, lowpass input, energy split") {
  const GridDims d(16, 16, 16, 16);
  const auto wb = build_windows(d, 2);

  const auto zero = decompose(Volume4(d), wb);
  for (const auto& b : zero.bands) CHECK(oracle::max_abs(b.data()) == 0.0);

  const auto wb1 = build_windows(d, 1);
  Volume4 low(d);
  for (std::size_t i4 = 0; i4 < d.n4; ++i4)
    for (std::size_t i3 = 0; i3 < d.n3; ++i3)
      for (std::size_t i2 = 0; i2 < d.n2; ++i2)
        for (std::size_t i1 = 0; i1 < d.n1; ++i1)
          low.at(i1, i2, i3, i4) = 1.0 + std::cos(2.0 * std::numbers::pi * double(i1) / 16.0);
  const auto split = decompose(low, wb1);
  CHECK(oracle::max_abs_diff(split.bands[0].data(), low.data()) <= 1e-10);
  CHECK(oracle::max_abs(split.bands[1].data()) <= 1e-10);

  const auto f = oracle::random_volume(d, 1);
  const auto bands = decompose(f, wb);
  double energy = 0.0;
  for (const auto& b : bands.bands) energy += oracle::dot(b.data(), b.data());
  CHECK(energy == doctest::Approx(oracle::dot(f.data(), f.data())).epsilon(1e-8));
}

TEST_CASE("recompose is the exact inverse and adjoint of decompose") {
  const GridDims d(16, 16, 16, 16);
  const auto wb = build_windows(d, 2);
  const auto f = oracle::random_volume(d, 2);
  const auto back = recompose(decompose(f, wb), wb);
  CHECK(oracle::max_abs_diff(back.data(), f.data()) <= 1e-9 * oracle::max_abs(f.data()));

  SubbandStack zero{d, 2, {Volume4(d), Volume4(d), Volume4(d)}};
  CHECK(oracle::max_abs(recompose(zero, wb).data()) == 0.0);

  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto g = oracle::random_volume(d, 10 + seed);
    SubbandStack s{d, 2, {}};
    for (int j = 0; j <= 2; ++j) s.bands.push_back(oracle::random_volume(d, 20 + seed * 3 + j));
    const auto dg = decompose(g, wb);
    double lhs = 0.0, norm_s = 0.0;
    for (int j = 0; j <= 2; ++j) {
      lhs += oracle::dot(dg.bands[j].data(), s.bands[j].data());
      norm_s += oracle::dot(s.bands[j].data(), s.bands[j].data());
    }
    const double rhs = oracle::dot(g.data(), recompose(s, wb).data());
    CHECK(std::abs(lhs - rhs) <= 1e-9 * oracle::norm(g.data()) * std::sqrt(norm_s));
  }
}

TEST_CASE("dimension mismatches are errors") {
  const auto wb = build_windows(GridDims(16, 16, 16, 4), 1);
  CHECK_THROWS_AS(decompose(Volume4(GridDims(16, 16, 16, 2)), wb), DimensionError);
  SubbandStack s{GridDims(16, 16, 16, 4), 1, {Volume4(GridDims(16, 16, 16, 4))}};
  CHECK_THROWS_AS(recompose(s, wb), DimensionError);
}
