#include "cylshear/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace cylsh::io {

std::filesystem::path sidecar_path(const std::filesystem::path& raw) {
  return std::filesystem::path(raw.string() + ".json");
}

void write_f32(const std::filesystem::path& path, std::span<const double> values) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  std::vector<std::uint32_t> buf(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint32_t bits = std::bit_cast<std::uint32_t>(static_cast<float>(values[i]));
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
    buf[i] = bits;
  }
  os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * 4));
  if (!os) throw IoError("write failed: " + path.string());
}

std::vector<double> read_f32(const std::filesystem::path& path, std::size_t expected_count) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  is.seekg(0, std::ios::end);
  const auto bytes = static_cast<std::size_t>(is.tellg());
  if (bytes != expected_count * 4) {
    throw IoError(path.string() + ": expected " + std::to_string(expected_count * 4) + " bytes, found " +
                  std::to_string(bytes));
  }
  is.seekg(0);
  std::vector<std::uint32_t> buf(expected_count);
  is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(bytes));
  if (!is) throw IoError("read failed: " + path.string());
  std::vector<double> out(expected_count);
  for (std::size_t i = 0; i < expected_count; ++i) {
    std::uint32_t bits = buf[i];
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
    out[i] = static_cast<double>(std::bit_cast<float>(bits));
  }
  return out;
}

void write_json(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << j.dump(2) << "\n";
  if (!os) throw IoError("write failed: " + path.string());
}

json read_json(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_volume(const std::filesystem::path& path, const Volume4& v, const json& extra) {
  write_f32(path, v.span());
  json side = extra.is_object() ? extra : json::object();
  const auto& d = v.dims();
  side["dims"] = {d.n1, d.n2, d.n3, d.n4};
  side["dtype"] = "f32";
  side["order"] = "axis1-fastest";
  write_json(sidecar_path(path), side);
}

Volume4 read_volume(const std::filesystem::path& path) {
  const json side = read_json(sidecar_path(path));
  if (!side.contains("dims") || !side["dims"].is_array() || side["dims"].size() != 4) {
    throw IoError(sidecar_path(path).string() + ": missing dims[4]");
  }
  if (side.value("dtype", "") != "f32" || side.value("order", "") != "axis1-fastest") {
    throw IoError(sidecar_path(path).string() + ": unsupported dtype/order");
  }
  const auto& a = side["dims"];
  GridDims dims(a[0].get<std::size_t>(), a[1].get<std::size_t>(), a[2].get<std::size_t>(),
                a[3].get<std::size_t>());
  return Volume4(dims, read_f32(path, dims.size()));
}

std::string fingerprint(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

void require_known_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

}  // namespace cylsh::io
