#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace ties {

using ConfigValue = std::variant<bool, std::int64_t, double, std::string>;

/// Flat view of a TOML document: `[section]` headers and dotted keys are
/// joined into "section.key".
///
/// Only the subset needed for run configuration is understood: bare and
/// dotted keys, basic "..." strings with \" \\ \n \t escapes, literal '...'
/// strings, integers, floats, booleans, comments. Arrays, inline tables and
/// dates raise ParseError.
class ConfigTable {
 public:
  static ConfigTable parse(std::string_view text);
  static ConfigTable load(const std::filesystem::path& path);

  bool contains(const std::string& key) const { return values_.contains(key); }
  const std::map<std::string, ConfigValue>& values() const { return values_; }

  std::optional<std::string> get_string(const std::string& key) const;
  std::optional<std::int64_t> get_int(const std::string& key) const;
  std::optional<double> get_double(const std::string& key) const;
  std::optional<bool> get_bool(const std::string& key) const;

 private:
  std::map<std::string, ConfigValue> values_;
};

}  // namespace ties
