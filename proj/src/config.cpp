#include "ties/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "ties/error.hpp"

namespace ties {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool is_bare_key_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'; }

std::string parse_key(std::string_view raw, std::size_t line) {
  auto key = trim(raw);
  if (key.empty()) throw ParseError("empty key", line);
  std::string out;
  for (char c : key) {
    if (c == ' ' || c == '\t') continue;
    if (!is_bare_key_char(c)) throw ParseError("unsupported key syntax '" + std::string(key) + "'", line);
    out += c;
  }
  return out;
}

// Parses a value starting at the front of `s`; returns the value and leaves any trailing text in `rest`.
ConfigValue parse_value(std::string_view s, std::size_t line, std::string_view& rest) {
  if (s.empty()) throw ParseError("missing value", line);
  if (s.front() == '"') {
    std::string out;
    for (std::size_t i = 1; i < s.size(); ++i) {
      char c = s[i];
      if (c == '"') {
        rest = s.substr(i + 1);
        return out;
      }
      if (c == '\\' && i + 1 < s.size()) {
        char e = s[++i];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: throw ParseError(std::string("unsupported escape \\") + e, line);
        }
      } else {
        out += c;
      }
    }
    throw ParseError("unterminated string", line);
  }
  if (s.front() == '\'') {
    auto end = s.find('\'', 1);
    if (end == std::string_view::npos) throw ParseError("unterminated string", line);
    rest = s.substr(end + 1);
    return std::string(s.substr(1, end - 1));
  }
  auto end = s.find_first_of(" \t#");
  auto token = s.substr(0, end);
  rest = end == std::string_view::npos ? std::string_view{} : s.substr(end);
  if (token == "true") return true;
  if (token == "false") return false;
  std::string digits;
  for (char c : token) {
    if (c != '_') digits += c;
  }
  std::string_view d = digits;
  if (!d.empty() && d.front() == '+') d.remove_prefix(1);
  std::int64_t iv = 0;
  if (auto [p, ec] = std::from_chars(d.data(), d.data() + d.size(), iv); ec == std::errc{} && p == d.data() + d.size()) {
    return iv;
  }
  double dv = 0;
  if (auto [p, ec] = std::from_chars(d.data(), d.data() + d.size(), dv); ec == std::errc{} && p == d.data() + d.size()) {
    return dv;
  }
  throw ParseError("unsupported value '" + std::string(token) + "'", line);
}

}  // namespace

ConfigTable ConfigTable::parse(std::string_view text) {
  ConfigTable table;
  std::string section;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      auto close = line.find(']');
      if (close == std::string_view::npos || line.substr(0, 2) == "[[") throw ParseError("bad table header", line_no);
      auto after = trim(line.substr(close + 1));
      if (!after.empty() && after.front() != '#') throw ParseError("text after table header", line_no);
      section = parse_key(line.substr(1, close - 1), line_no);
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key = value", line_no);
    std::string key = parse_key(line.substr(0, eq), line_no);
    if (!section.empty()) key = section + "." + key;
    std::string_view rest;
    ConfigValue value = parse_value(trim(line.substr(eq + 1)), line_no, rest);
    rest = trim(rest);
    if (!rest.empty() && rest.front() != '#') throw ParseError("unexpected text after value", line_no);
    if (!table.values_.emplace(key, std::move(value)).second) throw ParseError("duplicate key '" + key + "'", line_no);
  }
  return table;
}

ConfigTable ConfigTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

namespace {

template <typename T>
std::optional<T> get_as(const std::map<std::string, ConfigValue>& values, const std::string& key, const char* type) {
  auto it = values.find(key);
  if (it == values.end()) return std::nullopt;
  if (const T* v = std::get_if<T>(&it->second)) return *v;
  throw Error("config key '" + key + "' must be " + type);
}

}  // namespace

std::optional<std::string> ConfigTable::get_string(const std::string& key) const {
  return get_as<std::string>(values_, key, "a string");
}
std::optional<std::int64_t> ConfigTable::get_int(const std::string& key) const {
  return get_as<std::int64_t>(values_, key, "an integer");
}
std::optional<double> ConfigTable::get_double(const std::string& key) const {
  auto it = values_.find(key);
  if (it != values_.end()) {
    if (const auto* i = std::get_if<std::int64_t>(&it->second)) return static_cast<double>(*i);
  }
  return get_as<double>(values_, key, "a number");
}
std::optional<bool> ConfigTable::get_bool(const std::string& key) const { return get_as<bool>(values_, key, "a boolean"); }

}  // namespace ties
