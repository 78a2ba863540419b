#pragma once

#include <string>
#include <vector>

#include "helios/time.hpp"
#include "helios/vec3.hpp"

namespace helios {

struct Site {
  double latitude_deg = 0.0;   // +N
  double longitude_deg = 0.0;  // +E
  double altitude_m = 0.0;
  double turbidity = 3.0;      // Linke turbidity
  double albedo = 0.2;
};

void validate(const Site& s, const std::string& path = "site");

struct SunPosition {
  double azimuth_deg = 0.0;  // clockwise from North, [0, 360)
  double zenith_deg = 90.0;  // topocentric, no refraction
  double distance_factor = 1.0;  // (1 AU / R)², scales extraterrestrial irradiance
};

struct IrradianceRecord {
  Instant instant{};
  double ghi_wm2 = 0.0;
  double dni_wm2 = 0.0;
  double dhi_wm2 = 0.0;
  double temp_air_c = 25.0;
};

struct POAIrradiance {
  double beam = 0.0;
  double diffuse_sky = 0.0;
  double ground_reflected = 0.0;

  double diffuse_total() const { return diffuse_sky + ground_reflected; }
  double total() const { return beam + diffuse_sky + ground_reflected; }
};

/// Geocentric apparent solar coordinates for a Julian Ephemeris Day.
struct SolarCoordinates {
  double apparent_longitude_deg;
  double right_ascension_deg;  // [0, 360)
  double declination_deg;
  double radius_au;
  double obliquity_deg;     // true obliquity
  double nutation_lon_deg;  // Δψ
};

SolarCoordinates solar_coordinates(double jde);

/// TT − UT in seconds (polynomial fits, valid 1941–2150).
double delta_t_seconds(double decimal_year);

/// Topocentric sun position. DomainError outside 1950–2100.
SunPosition sun_position(const Site& site, Instant t);

/// Unit vector from the scene toward the sun (E, N, up). DomainError when
/// the sun is at or below the horizon.
Vec3 sun_direction(const SunPosition& pos);

/// Same as sun_direction without the horizon check.
Vec3 sun_vector(const SunPosition& pos);

/// Linke-turbidity clear-sky model with altitude correction (Ineichen–Perez
/// formulation). DHI closes the balance GHI = DNI·cos z + DHI. All zero at
/// night. The returned instant is left default.
IrradianceRecord clear_sky(const SunPosition& pos, const Site& site);

/// Isotropic-sky transposition with constant ground albedo.
POAIrradiance poa(const IrradianceRecord& rec, const SunPosition& pos, const Vec3& plane_normal, double albedo);

/// True when GHI ≤ DNI·cos z + DHI within `tolerance` relative.
bool closure_ok(const IrradianceRecord& rec, double zenith_deg, double tolerance = 0.05);

/// Instants from + k·step in [from, to) with solar zenith < 90°.
/// InputError when from >= to or step <= 0.
std::vector<Instant> daylight_steps(const Site& site, Instant from, Instant to, Duration step);

}  // namespace helios
