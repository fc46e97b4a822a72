#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ugk/geometry.hpp"
#include "ugk/solar.hpp"

namespace ugk {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Michalsky's almanac algorithm (mean longitude, anomaly, ecliptic longitude,
// sidereal time), written out independently of the library's Fourier fits.
SunState michalsky(int year, int day_of_year, double utc_hour, double lat_deg, double lon_deg) {
  const int delta = year - 1949;
  const int leap = delta / 4;
  const double jd = 2432916.5 + delta * 365 + leap + day_of_year + utc_hour / 24.0;
  const double time = jd - 2451545.0;

  const double mnlong = std::fmod(280.460 + 0.9856474 * time, 360.0);
  const double mnanom = std::fmod(357.528 + 0.9856003 * time, 360.0) * kDeg;
  const double eclong = std::fmod(mnlong + 1.915 * std::sin(mnanom) + 0.020 * std::sin(2 * mnanom), 360.0) * kDeg;
  const double oblqec = (23.439 - 0.0000004 * time) * kDeg;
  double ra = std::atan2(std::cos(oblqec) * std::sin(eclong), std::cos(eclong));
  if (ra < 0) ra += 2 * std::numbers::pi;
  const double dec = std::asin(std::sin(oblqec) * std::sin(eclong));

  double gmst = std::fmod(6.697375 + 0.0657098242 * time + utc_hour, 24.0);
  if (gmst < 0) gmst += 24.0;
  double lmst = std::fmod(gmst + lon_deg / 15.0, 24.0) * 15.0 * kDeg;
  double ha = lmst - ra;
  while (ha < -std::numbers::pi) ha += 2 * std::numbers::pi;
  while (ha > std::numbers::pi) ha -= 2 * std::numbers::pi;

  const double lat = lat_deg * kDeg;
  const double el = std::asin(std::sin(dec) * std::sin(lat) + std::cos(dec) * std::cos(lat) * std::cos(ha));
  const double az = std::atan2(-std::cos(dec) * std::sin(ha),
                               std::sin(dec) * std::cos(lat) - std::cos(dec) * std::sin(lat) * std::cos(ha));
  return {el / kDeg, wrap360(az / kDeg)};
}

TEST(SolarPosition, EquatorEquinoxNoonIsOverhead) {
  // Day 80 is the March equinox; clock time is local mean time at lon 0.
  const double noon = solar_noon_clock(0.0, 0.0, 80);
  EXPECT_NEAR(solar_position(0.0, 0.0, 0.0, 80, noon).elevation_deg, 90.0, 1.0);
}

TEST(SolarPosition, EquatorEquinoxSunsetIsOnHorizon) {
  const double noon = solar_noon_clock(0.0, 0.0, 80);
  EXPECT_NEAR(solar_position(0.0, 0.0, 0.0, 80, noon + 6.0).elevation_deg, 0.0, 1.0);
}

TEST(SolarPosition, SingaporeMatchesIndependentEphemeris) {
  // 1.35 N, 103.8 E, UTC+8, 21 June 2023 (day 172).
  for (double clock = 8.0; clock <= 18.0; clock += 0.5) {
    const SunState lib = solar_position(1.35, 103.8, 8.0, 172, clock);
    const SunState ref = michalsky(2023, 172, clock - 8.0, 1.35, 103.8);
    EXPECT_NEAR(lib.elevation_deg, ref.elevation_deg, 0.5) << "clock " << clock;
    if (ref.elevation_deg > 5.0) {
      EXPECT_NEAR(wrap180(lib.azimuth_deg - ref.azimuth_deg), 0.0, 0.5) << "clock " << clock;
    }
  }
  const SunState one_pm = solar_position(1.35, 103.8, 8.0, 172, 13.0);
  const SunState ref = michalsky(2023, 172, 5.0, 1.35, 103.8);
  EXPECT_NEAR(one_pm.elevation_deg, ref.elevation_deg, 0.5);
  EXPECT_GT(one_pm.elevation_deg, 60.0);
  // June, just north of the equator: the sun stands to the north.
  EXPECT_TRUE(one_pm.azimuth_deg < 90.0 || one_pm.azimuth_deg > 270.0);
}

TEST(ShadowLength, FortyFiveDegreesIsExact) {
  EXPECT_EQ(shadow_length(12.0, {45.0, 180.0}, 4.0, 15.0), 3.0);
}

TEST(ShadowLength, ZenithCastsNoShadow) {
  EXPECT_EQ(shadow_length(12.0, {90.0, 0.0}, 4.0, 15.0), 0.0);
  EXPECT_EQ(shadow_length(12.0, {-3.0, 0.0}, 4.0, 15.0), 0.0);
}

TEST(ShadowLength, LowSunIsCapped) {
  const double raw_m = 60.0 / std::tan(5.0 * kDeg);
  EXPECT_NEAR(raw_m, 685.803, 1e-3);
  EXPECT_NEAR(raw_m / 4.0, 171.451, 1e-3);
  EXPECT_EQ(shadow_length(60.0, {5.0, 0.0}, 4.0, 15.0), 15.0);
}

TEST(ShadowAzimuth, PointsAwayFromSun) {
  EXPECT_EQ(shadow_azimuth({30.0, 135.0}), 315.0);
  EXPECT_EQ(shadow_azimuth({30.0, 350.0}), 170.0);
  EXPECT_EQ(shadow_azimuth({30.0, 180.0}), 0.0);
}

TEST(ShadowAzimuth, RejectsSunBelowHorizon) {
  try {
    shadow_azimuth({-1.0, 90.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SunBelowHorizon);
  }
}

TEST(Geometry, BearingAndUnitVectorAgree) {
  for (double b = 0.0; b < 360.0; b += 15.0) {
    const auto [e, n] = unit_from_bearing(b);
    EXPECT_NEAR(wrap180(bearing_deg(e, n) - b), 0.0, 1e-12);
  }
  EXPECT_EQ(bearing_deg(0.0, 1.0), 0.0);
  EXPECT_EQ(bearing_deg(1.0, 0.0), 90.0);
}

}  // namespace
}  // namespace ugk
