#pragma once

#include <cstdio>
#include <string>

namespace twogroup {

/// Renders a double with 17 significant digits, enough to round-trip
/// exactly, so emitted tables are byte-stable across identical runs.
inline std::string format_g17(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace twogroup
