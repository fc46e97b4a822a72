#pragma once

#include <cmath>
#include <utility>

namespace ugk {

// Grid geometry shared by the edge builders and their oracle. Offsets are in
// grid units with dx pointing east (increasing column) and dy pointing north
// (decreasing row).

inline double grid_distance(double dx, double dy) { return std::sqrt(dx * dx + dy * dy); }

/// Maps any angle into [0, 360).
double wrap360(double deg);

/// Maps any angle into [-180, 180).
double wrap180(double deg);

/// Compass bearing of the offset (dx east, dy north), clockwise from north in [0, 360).
double bearing_deg(double dx, double dy);

/// Unit vector (east, north) of a compass bearing. Odd-symmetric:
/// unit_from_bearing(b + 180) == -unit_from_bearing(b) bit-for-bit for b in [0, 180).
std::pair<double, double> unit_from_bearing(double deg);

/// Cosine of the angle between the offset (dx, dy) and the unit vector u.
inline double cos_between(double dx, double dy, std::pair<double, double> u) {
  return (dx * u.first + dy * u.second) / grid_distance(dx, dy);
}

}  // namespace ugk
