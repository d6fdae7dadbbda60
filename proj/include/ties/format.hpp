#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <string>

namespace ties {

/// Shortest decimal string that round-trips to the same double; "inf"/"-inf"/"nan" otherwise.
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  std::array<char, 32> buf{};
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), p);
}

}  // namespace ties
