#include "ugk/solar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ugk/geometry.hpp"

namespace ugk {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

struct SolarTerms {
  double declination_rad;
  double equation_of_time_min;
};

// Fractional-year Fourier fits (NOAA Global Monitoring Division).
SolarTerms solar_terms(int day_of_year, double utc_hour) {
  const double gamma = 2.0 * kPi / 365.0 * (day_of_year - 1 + (utc_hour - 12.0) / 24.0);
  const double eot = 229.18 * (0.000075 + 0.001868 * std::cos(gamma) - 0.032077 * std::sin(gamma) -
                               0.014615 * std::cos(2 * gamma) - 0.040849 * std::sin(2 * gamma));
  const double decl = 0.006918 - 0.399912 * std::cos(gamma) + 0.070257 * std::sin(gamma) -
                      0.006758 * std::cos(2 * gamma) + 0.000907 * std::sin(2 * gamma) -
                      0.002697 * std::cos(3 * gamma) + 0.00148 * std::sin(3 * gamma);
  return {decl, eot};
}

}  // namespace

SunState solar_position(double latitude_deg, double longitude_deg, double utc_offset_h, int day_of_year,
                        double clock_hour) {
  const double utc_hour = clock_hour - utc_offset_h;
  const SolarTerms terms = solar_terms(day_of_year, utc_hour);

  // True solar time in minutes.
  const double time_offset = terms.equation_of_time_min + 4.0 * longitude_deg - 60.0 * utc_offset_h;
  const double tst = clock_hour * 60.0 + time_offset;
  const double hour_angle = (tst / 4.0 - 180.0) * kDeg;

  const double lat = latitude_deg * kDeg;
  const double decl = terms.declination_rad;
  double cos_zenith = std::sin(lat) * std::sin(decl) + std::cos(lat) * std::cos(decl) * std::cos(hour_angle);
  cos_zenith = std::clamp(cos_zenith, -1.0, 1.0);
  const double zenith = std::acos(cos_zenith);

  SunState sun;
  sun.elevation_deg = 90.0 - zenith / kDeg;

  // Azimuth from the horizontal components of the sun vector (east, north).
  const double east = -std::cos(decl) * std::sin(hour_angle);
  const double north = std::cos(lat) * std::sin(decl) - std::sin(lat) * std::cos(decl) * std::cos(hour_angle);
  double az = std::atan2(east, north) / kDeg;
  sun.azimuth_deg = wrap360(az);
  return sun;
}

double solar_noon_clock(double longitude_deg, double utc_offset_h, int day_of_year) {
  // Two fixed-point passes: the equation of time depends weakly on the hour.
  double clock = 12.0;
  for (int i = 0; i < 3; ++i) {
    const SolarTerms terms = solar_terms(day_of_year, clock - utc_offset_h);
    clock = 12.0 - (terms.equation_of_time_min + 4.0 * longitude_deg - 60.0 * utc_offset_h) / 60.0;
  }
  return clock;
}

SunState sun_for(const WeatherRecord& weather, const GridScene& scene) {
  if (weather.solar_elev_deg && weather.solar_azim_deg) {
    return SunState{*weather.solar_elev_deg, *weather.solar_azim_deg};
  }
  return solar_position(scene.latitude_deg, scene.longitude_deg, scene.utc_offset_h, scene.day_of_year,
                        static_cast<double>(weather.clock_hour));
}

double tan_deg(double deg) {
  if (deg == 45.0) return 1.0;
  return std::tan(deg * kDeg);
}

double shadow_length(double h_obj_m, const SunState& sun, double cell_size_m, double r_max_grids) {
  if (!sun.is_up() || sun.elevation_deg >= 90.0) return 0.0;
  const double length = h_obj_m / (tan_deg(sun.elevation_deg) * cell_size_m);
  return std::min(length, r_max_grids);
}

double shadow_azimuth(const SunState& sun) {
  if (!sun.is_up()) throw Error(ErrorCode::SunBelowHorizon, "no shadow direction with the sun down");
  return std::fmod(sun.azimuth_deg + 180.0, 360.0);
}

}  // namespace ugk
