#pragma once

#include <filesystem>
#include <vector>

#include "cylshear/core.hpp"

namespace cylsh::cli {

/// 8-bit grayscale PNG of slice i3 = `slice` of every frame, values mapped
/// linearly from [lo, hi] to [0, 255] and clipped. Returns the files written.
std::vector<std::filesystem::path> write_slice_pngs(const Volume4& v, const std::filesystem::path& dir,
                                                    const std::string& stem, std::size_t slice, double lo, double hi);

}  // namespace cylsh::cli
