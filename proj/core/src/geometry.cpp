#include "ugk/geometry.hpp"

#include <numbers>

namespace ugk {

double wrap360(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r -= 360.0;
  return r;
}

double wrap180(double deg) {
  double r = wrap360(deg + 180.0) - 180.0;
  return r;
}

double bearing_deg(double dx, double dy) {
  return wrap360(std::atan2(dx, dy) * 180.0 / std::numbers::pi);
}

std::pair<double, double> unit_from_bearing(double deg) {
  const double b = wrap360(deg);
  if (b >= 180.0) {
    auto [e, n] = unit_from_bearing(b - 180.0);
    return {-e, -n};
  }
  const double rad = b * std::numbers::pi / 180.0;
  return {std::sin(rad), std::cos(rad)};
}

}  // namespace ugk
