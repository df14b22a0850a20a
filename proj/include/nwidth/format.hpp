#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace nwidth {

// 17 significant digits: round-trips every double, so CSV output is bit-stable.
inline std::string format_exact(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Shortest %g form when it round-trips, for echoing user-supplied parameters.
inline std::string format_short(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  if (std::strtod(buf, nullptr) == v) return buf;
  return format_exact(v);
}

}  // namespace nwidth
