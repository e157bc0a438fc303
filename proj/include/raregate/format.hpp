#pragma once

// Display formatting for report values. Metrics are printed truncated, not
// rounded: 0.21875 prints as "0.2187" at four decimals, matching the way
// rareness figures are conventionally quoted.

#include <cmath>
#include <cstdint>
#include <string>

namespace raregate {

inline double truncate_to(double x, int decimals) {
  double scale = std::pow(10.0, decimals);
  return std::floor(x * scale) / scale;
}

// Fixed-width decimal string of the truncated value, e.g. (0.303385..., 4)
// -> "0.3033".
inline std::string trunc_display(double x, int decimals) {
  double scale = std::pow(10.0, decimals);
  long long scaled = static_cast<long long>(std::floor(x * scale));
  bool negative = scaled < 0;
  unsigned long long mag = negative ? -(unsigned long long)scaled : scaled;
  unsigned long long unit = static_cast<unsigned long long>(scale);
  std::string frac = std::to_string(mag % unit);
  frac.insert(frac.begin(), decimals - frac.size(), '0');
  return (negative ? "-" : "") + std::to_string(mag / unit) + "." + frac;
}

}  // namespace raregate
