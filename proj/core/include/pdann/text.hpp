#pragma once

#include <cstdio>
#include <string>

namespace pdann {

/// Formats v with 12 significant digits, the precision used for all text
/// output. Round-trips every coordinate the library accepts well below any
/// tolerance in play.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace pdann
