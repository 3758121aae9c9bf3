#pragma once

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace citenv {

/// Fixed-point rendering with exactly `precision` decimals. std::to_chars
/// rounds the exact binary value to nearest, ties to even, and does not
/// depend on locale, so output is identical across platforms.
inline std::string fixed(double value, int precision) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite value");
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value,
                                 std::chars_format::fixed, precision);
  if (ec != std::errc{}) throw std::invalid_argument("unformattable value");
  std::string out(buf, end);
  // "-0.000000" carries no information and breaks byte comparisons.
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos)
    out.erase(0, 1);
  return out;
}

inline std::string fixed6(double value) { return fixed(value, 6); }

inline bool parse_double(std::string_view text, double& out) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size() &&
         std::isfinite(out);
}

template <typename Int>
bool parse_integer(std::string_view text, Int& out) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace citenv
