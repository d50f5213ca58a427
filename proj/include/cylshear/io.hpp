#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <span>
#include <vector>

#include <json.hpp>

#include "cylshear/core.hpp"

namespace cylsh::io {

using nlohmann::json;

/// Sidecar path for a raw file: "<path>.json".
std::filesystem::path sidecar_path(const std::filesystem::path& raw);

/// Writes little-endian float32 samples.
void write_f32(const std::filesystem::path& path, std::span<const double> values);
std::vector<double> read_f32(const std::filesystem::path& path, std::size_t expected_count);

/// Raw volume + sidecar {dims, dtype:"f32", order:"axis1-fastest"} merged
/// with `extra` (provenance fields).
void write_volume(const std::filesystem::path& path, const Volume4& v, const json& extra = json::object());
Volume4 read_volume(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

/// Throws ConfigError naming the first key of `obj` not in `allowed`.
void require_known_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where);

/// Hex FNV-1a hash of a string, used as config fingerprint in sidecars.
std::string fingerprint(const std::string& text);

}  // namespace cylsh::io
