#pragma once

#include <cstdio>
#include <string>

namespace escl {

/// Formats a double with 17 significant digits, the round-trip precision
/// used by every CSV/JSON emitter in this project.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace escl
