#include "helios/solar.hpp"

#include <algorithm>
#include <cmath>

#include "helios/error.hpp"

namespace helios {
namespace {

double wrap360(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  return r >= 360.0 ? 0.0 : r;
}

double sind(double d) { return std::sin(deg2rad(d)); }
double cosd(double d) { return std::cos(deg2rad(d)); }

constexpr double kSolarConstant = 1367.0;  // W/m²

}  // namespace

void validate(const Site& s, const std::string& path) {
  if (!(std::abs(s.latitude_deg) <= 90.0)) throw InputError(path + ".lat_deg must be in [-90, 90]", path + ".lat_deg");
  if (!(std::abs(s.longitude_deg) <= 180.0))
    throw InputError(path + ".lon_deg must be in [-180, 180]", path + ".lon_deg");
  if (!std::isfinite(s.altitude_m)) throw InputError(path + ".altitude_m must be finite", path + ".altitude_m");
  if (!(s.turbidity > 0.0) || !std::isfinite(s.turbidity))
    throw InputError(path + ".turbidity must be > 0", path + ".turbidity");
  if (!(s.albedo >= 0.0 && s.albedo <= 1.0)) throw InputError(path + ".albedo must be in [0, 1]", path + ".albedo");
}

double delta_t_seconds(double y) {
  if (y < 1961.0) {
    const double t = y - 1950.0;
    return 29.07 + 0.407 * t - t * t / 233.0 + t * t * t / 2547.0;
  }
  if (y < 1986.0) {
    const double t = y - 1975.0;
    return 45.45 + 1.067 * t - t * t / 260.0 - t * t * t / 718.0;
  }
  if (y < 2005.0) {
    const double t = y - 2000.0;
    return 63.86 + 0.3345 * t - 0.060374 * t * t + 0.0017275 * t * t * t + 0.000651814 * t * t * t * t +
           0.00002373599 * t * t * t * t * t;
  }
  if (y < 2050.0) {
    const double t = y - 2000.0;
    return 62.92 + 0.32217 * t + 0.005589 * t * t;
  }
  const double u = (y - 1820.0) / 100.0;
  return -20.0 + 32.0 * u * u - 0.5628 * (2150.0 - y);
}

SolarCoordinates solar_coordinates(double jde) {
  const double T = (jde - 2451545.0) / 36525.0;
  const double L0 = 280.46646 + 36000.76983 * T + 0.0003032 * T * T;
  const double M = 357.52911 + 35999.05029 * T - 0.0001537 * T * T;
  const double e = 0.016708634 - 0.000042037 * T - 0.0000001267 * T * T;
  const double C = (1.914602 - 0.004817 * T - 0.000014 * T * T) * sind(M) + (0.019993 - 0.000101 * T) * sind(2 * M) +
                   0.000289 * sind(3 * M);
  const double true_lon = L0 + C;
  const double nu = M + C;
  const double R = 1.000001018 * (1.0 - e * e) / (1.0 + e * cosd(nu));

  const double omega = 125.04452 - 1934.136261 * T;
  const double L_sun = 280.4665 + 36000.7698 * T;
  const double L_moon = 218.3165 + 481267.8813 * T;
  const double dpsi =
      (-17.20 * sind(omega) - 1.32 * sind(2 * L_sun) - 0.23 * sind(2 * L_moon) + 0.21 * sind(2 * omega)) / 3600.0;
  const double deps =
      (9.20 * cosd(omega) + 0.57 * cosd(2 * L_sun) + 0.10 * cosd(2 * L_moon) - 0.09 * cosd(2 * omega)) / 3600.0;

  // Aberration (−20.4898"/R) plus nutation in longitude.
  const double lambda = true_lon - 20.4898 / 3600.0 / R + dpsi;
  const double eps0 = 23.0 + 26.0 / 60.0 + 21.448 / 3600.0 - (46.8150 * T + 0.00059 * T * T - 0.001813 * T * T * T) / 3600.0;
  const double eps = eps0 + deps;

  const double alpha = wrap360(rad2deg(std::atan2(cosd(eps) * sind(lambda), cosd(lambda))));
  const double delta = rad2deg(std::asin(sind(eps) * sind(lambda)));
  return {wrap360(lambda), alpha, delta, R, eps, dpsi};
}

SunPosition sun_position(const Site& site, Instant t) {
  const double year = decimal_year(t);
  if (year < 1950.0 || year >= 2101.0)
    throw DomainError("instant " + format_instant(t) + " outside the supported range 1950-2100");

  const double jd = julian_day(t);
  const double jde = jd + delta_t_seconds(year) / 86400.0;
  const SolarCoordinates sc = solar_coordinates(jde);

  const double Tu = (jd - 2451545.0) / 36525.0;
  const double gmst = 280.46061837 + 360.98564736629 * (jd - 2451545.0) + 0.000387933 * Tu * Tu - Tu * Tu * Tu / 38710000.0;
  const double gast = gmst + sc.nutation_lon_deg * cosd(sc.obliquity_deg);
  const double H = wrap360(gast + site.longitude_deg - sc.right_ascension_deg);

  // Parallax of the observer on the reference ellipsoid.
  const double phi = site.latitude_deg;
  const double xi = 8.794 / 3600.0 / sc.radius_au;
  const double u = std::atan(0.99664719 * std::tan(deg2rad(phi)));
  const double x = std::cos(u) + site.altitude_m / 6378140.0 * cosd(phi);
  const double y = 0.99664719 * std::sin(u) + site.altitude_m / 6378140.0 * sind(phi);
  const double den = cosd(sc.declination_deg) - x * sind(xi) * cosd(H);
  const double d_alpha = rad2deg(std::atan2(-x * sind(xi) * sind(H), den));
  const double delta_p = rad2deg(std::atan2((sind(sc.declination_deg) - y * sind(xi)) * cosd(d_alpha), den));
  const double Hp = H - d_alpha;

  const double sin_e0 = sind(phi) * sind(delta_p) + cosd(phi) * cosd(delta_p) * cosd(Hp);
  const double e0 = rad2deg(std::asin(std::clamp(sin_e0, -1.0, 1.0)));
  const double gamma =
      rad2deg(std::atan2(sind(Hp), cosd(Hp) * sind(phi) - std::tan(deg2rad(delta_p)) * cosd(phi)));

  SunPosition pos;
  pos.zenith_deg = 90.0 - e0;
  pos.azimuth_deg = wrap360(gamma + 180.0);
  pos.distance_factor = 1.0 / (sc.radius_au * sc.radius_au);
  return pos;
}

Vec3 sun_vector(const SunPosition& pos) {
  const double z = deg2rad(pos.zenith_deg);
  const double az = deg2rad(pos.azimuth_deg);
  return {std::sin(z) * std::sin(az), std::sin(z) * std::cos(az), std::cos(z)};
}

Vec3 sun_direction(const SunPosition& pos) {
  if (!(pos.zenith_deg < 90.0)) throw DomainError("sun below horizon");
  return sun_vector(pos);
}

IrradianceRecord clear_sky(const SunPosition& pos, const Site& site) {
  IrradianceRecord rec;
  if (!(pos.zenith_deg < 90.0)) return rec;
  const double z = pos.zenith_deg;
  const double cosz = cosd(z);
  const double h = site.altitude_m;
  const double tl = site.turbidity;
  const double i0 = kSolarConstant * pos.distance_factor;

  // Kasten & Young relative air mass, pressure corrected with altitude.
  const double am = 1.0 / (cosz + 0.50572 * std::pow(96.07995 - z, -1.6364)) * std::exp(-h / 8434.5);
  const double fh1 = std::exp(-h / 8000.0);
  const double fh2 = std::exp(-h / 1250.0);
  const double cg1 = 5.09e-5 * h + 0.868;
  const double cg2 = 3.92e-5 * h + 0.0387;

  const double ghi = cg1 * i0 * cosz * std::max(0.0, std::exp(-cg2 * am * (fh1 + fh2 * (tl - 1.0))));
  const double b = 0.664 + 0.163 / fh1;
  const double bnci = i0 * std::max(0.0, b * std::exp(-0.09 * am * (tl - 1.0)));
  const double bnci2 =
      ghi * std::clamp((1.0 - (0.1 - 0.2 * std::exp(-tl)) / (0.1 + 0.882 / fh1)) / cosz, 0.0, 1e20);
  const double dni = std::min(bnci, bnci2);

  rec.ghi_wm2 = std::max(0.0, ghi);
  rec.dni_wm2 = std::max(0.0, dni);
  rec.dhi_wm2 = std::max(0.0, rec.ghi_wm2 - rec.dni_wm2 * cosz);
  return rec;
}

POAIrradiance poa(const IrradianceRecord& rec, const SunPosition& pos, const Vec3& plane_normal, double albedo) {
  const double cos_aoi = dot(plane_normal, sun_vector(pos));
  const double cos_tilt = std::clamp(plane_normal.z, -1.0, 1.0);
  POAIrradiance out;
  out.beam = rec.dni_wm2 * std::max(0.0, cos_aoi);
  out.diffuse_sky = rec.dhi_wm2 * (1.0 + cos_tilt) / 2.0;
  out.ground_reflected = rec.ghi_wm2 * albedo * (1.0 - cos_tilt) / 2.0;
  return out;
}

bool closure_ok(const IrradianceRecord& rec, double zenith_deg, double tolerance) {
  const double rhs = rec.dni_wm2 * std::max(0.0, cosd(zenith_deg)) + rec.dhi_wm2;
  return rec.ghi_wm2 <= rhs + tolerance * std::max(rec.ghi_wm2, rhs);
}

std::vector<Instant> daylight_steps(const Site& site, Instant from, Instant to, Duration step) {
  if (from >= to) throw InputError("period start must be before its end");
  if (step.count() <= 0) throw InputError("step must be positive");
  std::vector<Instant> out;
  for (Instant t = from; t < to; t += step)
    if (sun_position(site, t).zenith_deg < 90.0) out.push_back(t);
  return out;
}

}  // namespace helios
