#pragma once

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "helios/generator.hpp"
#include "helios/mesh.hpp"
#include "helios/shadow.hpp"
#include "helios/solar.hpp"
#include "oracles.hpp"

// Random occluder soups over a square patch of sample points, shared by the
// unit tests and the acceptance run.
namespace scenes {

using helios::SamplePoint;
using helios::Triangle;
using helios::Vec3;

struct Patch {
  Vec3 center;
  Vec3 normal, right, up;
  double half = 2.0;  // patch half-size (m)
  std::vector<SamplePoint> samples;
  std::array<Vec3, 4> footprint;
  std::vector<Triangle> occluders;

  Vec3 local(double a, double b, double h) const { return center + right * a + up * b + normal * h; }
};

// Tilted square patch with `n_samples` random points and `n_tris` triangles.
// Triangles keep at least 0.1 m clearance from the patch plane, so depth
// ties never occur; a fifth of them sit behind the plane.
inline Patch random_patch(std::mt19937_64& rng, int n_tris, int n_samples) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Patch p;
  p.center = {200.0 * unit(rng) - 100.0, 200.0 * unit(rng) - 100.0, 10.0 * unit(rng)};
  p.normal = helios::fixed_normal(360.0 * unit(rng), 40.0 * unit(rng));
  const auto basis = helios::plane_basis(p.normal, 180.0);
  p.right = basis.right;
  p.up = basis.up;
  p.footprint = {p.local(-p.half, -p.half, 0), p.local(p.half, -p.half, 0), p.local(p.half, p.half, 0),
                 p.local(-p.half, p.half, 0)};
  for (int k = 0; k < n_samples; ++k) {
    SamplePoint s;
    s.position = p.local(p.half * (2 * unit(rng) - 1), p.half * (2 * unit(rng) - 1), 0.0);
    s.cell = k;
    p.samples.push_back(s);
  }
  for (int k = 0; k < n_tris; ++k) {
    const bool behind = unit(rng) < 0.2;
    const double h = 0.1 + 2.9 * unit(rng);
    const double a = 3.5 * (2 * unit(rng) - 1), b = 3.5 * (2 * unit(rng) - 1);
    const double size = 0.2 + 1.3 * unit(rng);
    Triangle t;
    for (auto& v : t.v) {
      const double dh = std::min(0.5, h - 0.1) * (2 * unit(rng) - 1);
      v = p.local(a + size * (2 * unit(rng) - 1), b + size * (2 * unit(rng) - 1), (behind ? -1.0 : 1.0) * (h + dh));
    }
    p.occluders.push_back(t);
  }
  return p;
}

// Daylight sun direction, zenith below `max_zenith_deg`.
inline Vec3 random_sun(std::mt19937_64& rng, double max_zenith_deg = 85.0) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  helios::SunPosition pos;
  pos.zenith_deg = max_zenith_deg * unit(rng);
  pos.azimuth_deg = 360.0 * unit(rng);
  return helios::sun_direction(pos);
}

struct Agreement {
  long beyond_15 = 0, agree_15 = 0;
  long beyond_3 = 0, agree_3 = 0;
  long total = 0, agree = 0;
};

inline void tally(Agreement& a, const Patch& p, const Vec3& sun, const helios::ShadingMask& mask, double texel) {
  for (std::size_t i = 0; i < p.samples.size(); ++i) {
    const bool ray = helios::ray_cast_shaded(p.occluders, sun, p.samples[i].position);
    const bool ok = ray == (mask.shaded[i] != 0);
    const double margin = oracle::silhouette_distance(p.occluders, sun, p.samples[i].position) / texel;
    ++a.total;
    a.agree += ok;
    if (margin > 1.5) {
      ++a.beyond_15;
      a.agree_15 += ok;
    }
    if (margin > 3.0) {
      ++a.beyond_3;
      a.agree_3 += ok;
    }
  }
}

}  // namespace scenes
