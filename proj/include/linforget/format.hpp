#pragma once

#include <charconv>
#include <string>

namespace linforget {

/// Locale-independent decimal rendering with 17 significant digits
/// (round-trip exact for binary64); '.' is always the decimal separator.
inline std::string format_double(double v) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace linforget
