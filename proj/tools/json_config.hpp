#pragma once

#include <algorithm>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace cylsh::cli {

/// CLI11 config reader for JSON files. Objects become sections (one per
/// subcommand), arrays become multi-value inputs. '_' in keys reads as '-'.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(input);
    } catch (const nlohmann::json::parse_error& e) {
      throw CLI::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConfigError("config must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    walk(j, {}, items);
    return items;
  }

 private:
  static std::string key(std::string k) {
    std::replace(k.begin(), k.end(), '_', '-');
    return k;
  }

  static std::string scalar(const nlohmann::json& v, const std::string& where) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
    if (v.is_number_float()) {
      std::ostringstream os;
      os.precision(17);
      os << v.get<double>();
      return os.str();
    }
    throw CLI::ConfigError("config value of '" + where + "' must be a scalar or an array of scalars");
  }

  static void walk(const nlohmann::json& obj, const std::vector<std::string>& parents,
                   std::vector<CLI::ConfigItem>& items) {
    for (const auto& [k, v] : obj.items()) {
      const std::string name = key(k);
      if (v.is_object()) {
        auto sub = parents;
        sub.push_back(name);
        items.push_back({sub, "++", {}});
        walk(v, sub, items);
        items.push_back({sub, "--", {}});
        continue;
      }
      CLI::ConfigItem item{parents, name, {}};
      if (v.is_array()) {
        for (const auto& e : v) item.inputs.push_back(scalar(e, name));
      } else {
        item.inputs.push_back(scalar(v, name));
      }
      items.push_back(std::move(item));
    }
  }
};

}  // namespace cylsh::cli
