#pragma once

#include <cmath>
#include <numbers>

namespace fivebar {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Wraps an angle into (-pi, pi].
inline double normalize_angle(double a) {
  double r = std::remainder(a, two_pi);
  if (r <= -pi) r += two_pi;
  return r;
}

// Signed shortest difference a - b on the circle, in (-pi, pi].
inline double angle_difference(double a, double b) { return normalize_angle(a - b); }

inline double degrees_to_radians(double deg) { return deg * pi / 180.0; }
inline double radians_to_degrees(double rad) { return rad * 180.0 / pi; }

}  // namespace fivebar
