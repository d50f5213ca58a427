#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>

#include "cylshear/fft.hpp"
#include "cylshear/io.hpp"
#include "oracles.hpp"

using namespace cylsh;

TEST_CASE("grid validation rejects odd spatial axes and tiny axes") {
  CHECK_THROWS_AS(validate(GridDims(4, 5, 4, 2)), DimensionError);
  CHECK_THROWS_AS(validate(GridDims(4, 4, 4, 1)), DimensionError);
  CHECK_NOTHROW(validate(GridDims(4, 4, 4, 3)));
  CHECK_THROWS_AS(Volume4(GridDims(4, 4, 4, 2), std::vector<double>(10)), DimensionError);
}

TEST_CASE("dft of a unit impulse is all ones") {
  Volume4 v(GridDims(4, 4, 4, 2));
  v[0] = 1.0;
  const auto s = dft(v);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s[i].real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(s[i].imag()) < 1e-14);
  }
}

TEST_CASE("dft of a constant concentrates at zero frequency") {
  const GridDims d(4, 4, 4, 2);
  Volume4 v(d, 0.75);
  const auto s = dft(v);
  CHECK(std::abs(s[0] - complex(0.75 * d.size(), 0.0)) < 1e-12);
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(std::abs(s[i]) < 1e-12);
}

TEST_CASE("dft matches the full DFT sum") {
  const GridDims d(4, 4, 4, 2);
  const auto v = oracle::random_volume(d, 7);
  const auto s = dft(v);
  const auto ref = oracle::dft_full(oracle::to_complex(v.data()), d, -1);
  double err = 0.0, mag = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    err = std::max(err, std::abs(s[i] - ref[i]));
    mag = std::max(mag, std::abs(ref[i]));
  }
  CHECK(err <= 1e-12 * mag);
  // the separable direct oracle used elsewhere agrees with the full sum
  const auto sep = oracle::dft_direct(oracle::to_complex(v.data()), d, -1);
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(sep[i] - ref[i]) <= 1e-12 * mag);
}

TEST_CASE("idft inverts dft and handles zero spectra") {
  const GridDims d(8, 6, 4, 4);
  const auto v = oracle::random_volume(d, 11);
  const auto back = idft(dft(v));
  CHECK(oracle::max_abs_diff(back.data(), v.data()) <= 1e-12 * oracle::max_abs(v.data()));

  const auto zero = idft(Spectrum4(d));
  CHECK(oracle::max_abs(zero.data()) == 0.0);
}

TEST_CASE("Hermitian-symmetric spectrum gives a real output") {
  const GridDims d(4, 4, 4, 2);
  const auto re = oracle::random_vector(d.size(), 3), im = oracle::random_vector(d.size(), 4);
  Spectrum4 s(d);
  for (std::size_t i4 = 0; i4 < d.n4; ++i4)
    for (std::size_t i3 = 0; i3 < d.n3; ++i3)
      for (std::size_t i2 = 0; i2 < d.n2; ++i2)
        for (std::size_t i1 = 0; i1 < d.n1; ++i1) {
          const std::size_t p = d.index(i1, i2, i3, i4);
          const std::size_t q = d.index(mirror_index(i1, d.n1), mirror_index(i2, d.n2), mirror_index(i3, d.n3),
                                        mirror_index(i4, d.n4));
          s[p] = 0.5 * (complex(re[p], im[p]) + std::conj(complex(re[q], im[q])));
        }
  double residue = 1.0;
  idft(s, &residue);
  CHECK(residue < 1e-12);
}

TEST_CASE("idft rejects a spectrum with a large imaginary residue") {
  const GridDims d(4, 4, 4, 2);
  Spectrum4 s(d);
  s[1] = complex(0.0, 1.0);  // not mirrored
  CHECK_THROWS_AS(idft(s), NumericalError);
}

TEST_CASE("round trip, Parseval and linearity over random volumes") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const GridDims d(8, 4, 6, 3);
    const auto v = oracle::random_volume(d, seed), w = oracle::random_volume(d, seed + 100);
    const auto sv = dft(v), sw = dft(w);
    const auto back = idft(sv);
    CHECK(oracle::max_abs_diff(back.data(), v.data()) <= 1e-10 * oracle::max_abs(v.data()));

    double spec = 0.0;
    for (const auto& z : sv.data()) spec += std::norm(z);
    const double energy = oracle::dot(v.data(), v.data());
    CHECK(spec == doctest::Approx(d.size() * energy).epsilon(1e-10));

    Volume4 combo(d);
    for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = 2.0 * v[i] - 0.5 * w[i];
    const auto sc = dft(combo);
    for (std::size_t i = 0; i < sc.size(); ++i) {
      CHECK(std::abs(sc[i] - (2.0 * sv[i] - 0.5 * sw[i])) < 1e-10 * std::sqrt(spec));
    }
  }
}

TEST_CASE("raw volume file is float32 little-endian with a sidecar") {
  const auto dir = std::filesystem::temp_directory_path() / "cylsh_test_core";
  std::filesystem::remove_all(dir);
  const GridDims d(4, 4, 2, 2);
  const auto v = oracle::random_volume(d, 5);
  io::write_volume(dir / "v.f32", v, {{"origin", "test"}});
  CHECK(std::filesystem::file_size(dir / "v.f32") == d.size() * 4);
  const auto side = io::read_json(io::sidecar_path(dir / "v.f32"));
  CHECK(side["order"] == "axis1-fastest");
  CHECK(side["dtype"] == "f32");
  CHECK(side["origin"] == "test");
  const auto back = io::read_volume(dir / "v.f32");
  CHECK(back.dims() == d);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(back[i] == static_cast<double>(static_cast<float>(v[i])));

  unsigned char bytes[4];
  std::ifstream is(dir / "v.f32", std::ios::binary);
  is.read(reinterpret_cast<char*>(bytes), 4);
  const float first = static_cast<float>(v[0]);
  std::uint32_t bits;
  std::memcpy(&bits, &first, 4);
  CHECK(bytes[0] == (bits & 0xff));
  CHECK(bytes[3] == (bits >> 24));
  std::filesystem::remove_all(dir);
}
