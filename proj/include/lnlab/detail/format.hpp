#pragma once

#include <cstdio>
#include <string>

namespace lnlab::detail {

/// Every floating-point value written to a report uses 17 significant digits.
inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace lnlab::detail
