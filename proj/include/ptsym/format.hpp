#pragma once

#include <cstdio>
#include <string>

namespace ptsym {

/// Fixed 17-significant-digit float formatting; reports and CSV files must be
/// byte-identical across runs.
inline std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace ptsym
