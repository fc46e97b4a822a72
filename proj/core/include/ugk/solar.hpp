#pragma once

#include "ugk/scene.hpp"

namespace ugk {

struct SunState {
  double elevation_deg = 0.0;
  /// Clockwise from north, [0, 360).
  double azimuth_deg = 0.0;

  bool is_up() const { return elevation_deg > 0.0; }
};

/// Solar elevation/azimuth from the NOAA declination + equation-of-time
/// approximation (no refraction). `clock_hour` is local clock time in hours,
/// possibly fractional; `utc_offset_h` is the zone offset of that clock.
SunState solar_position(double latitude_deg, double longitude_deg, double utc_offset_h,
                        int day_of_year, double clock_hour);

/// Clock time of true solar noon under the same model.
double solar_noon_clock(double longitude_deg, double utc_offset_h, int day_of_year);

/// Solar angles from the weather row when present, else computed from the
/// scene location and the row's clock hour.
SunState sun_for(const WeatherRecord& weather, const GridScene& scene);

/// tan of an angle in degrees; exact at 45 degrees.
double tan_deg(double deg);

/// Shadow length in grid units, h / (tan(elev) * cell), capped at r_max_grids;
/// zero while the sun is down or at the zenith.
double shadow_length(double h_obj_m, const SunState& sun, double cell_size_m, double r_max_grids);

/// (azimuth + 180) mod 360. Throws SunBelowHorizon when the sun is down.
double shadow_azimuth(const SunState& sun);

}  // namespace ugk
