#pragma once

#include <cmath>
#include <limits>

namespace test_util {

inline bool close_rel(double a, double b, double rtol) {
  if (a == b) {
    return true;
  }
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= rtol * scale;
}

// Distance |a - b| measured in units of ulp(a).
inline double ulps_between(double a, double b) {
  if (a == b) {
    return 0.0;
  }
  const double mag = std::abs(a);
  const double ulp =
      std::nextafter(mag, std::numeric_limits<double>::infinity()) - mag;
  return std::abs(a - b) / ulp;
}

}  // namespace test_util
