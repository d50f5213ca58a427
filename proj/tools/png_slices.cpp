#include "png_slices.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

namespace cylsh::cli {

namespace {

void write_png(const std::filesystem::path& path, std::size_t width, std::size_t height,
               const std::vector<unsigned char>& pixels) {
  std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!fp) throw IoError("cannot open " + path.string() + " for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng failed writing " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::size_t y = 0; y < height; ++y) png_write_row(png, pixels.data() + y * width);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

std::vector<std::filesystem::path> write_slice_pngs(const Volume4& v, const std::filesystem::path& dir,
                                                    const std::string& stem, std::size_t slice, double lo, double hi) {
  const auto& d = v.dims();
  if (slice >= d.n3) throw ConfigError("png slice " + std::to_string(slice) + " outside 0.." + std::to_string(d.n3 - 1));
  if (!(hi > lo)) throw ConfigError("png range needs lo < hi");
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> out;
  std::vector<unsigned char> pixels(d.n1 * d.n2);
  for (std::size_t t = 0; t < d.n4; ++t) {
    // Rows run along axis 2, columns along axis 1.
    for (std::size_t i2 = 0; i2 < d.n2; ++i2)
      for (std::size_t i1 = 0; i1 < d.n1; ++i1) {
        const double s = std::clamp((v.at(i1, i2, slice, t) - lo) / (hi - lo), 0.0, 1.0);
        pixels[i2 * d.n1 + i1] = static_cast<unsigned char>(std::lround(255.0 * s));
      }
    char name[64];
    std::snprintf(name, sizeof name, "_z%03zu_t%02zu.png", slice, t);
    out.push_back(dir / (stem + name));
    write_png(out.back(), d.n1, d.n2, pixels);
  }
  return out;
}

}  // namespace cylsh::cli
