#include "helios/shadow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "helios/error.hpp"

namespace helios {

std::size_t ShadingMask::shaded_count() const {
  return static_cast<std::size_t>(std::count(shaded.begin(), shaded.end(), std::uint8_t{1}));
}

double default_bias(double texel, const Vec3& sun_dir, const Vec3& plane_normal) {
  const double c = std::abs(dot(normalized(sun_dir), normalized(plane_normal)));
  return std::min(4.0 * texel, 2.0 * texel / std::max(0.1, c));
}

ShadingMask classify(const DepthMap& map, std::span<const SamplePoint> samples, double bias) {
  if (!(bias >= 0.0)) throw InputError("bias must be >= 0", "bias");
  ShadingMask mask;
  mask.shaded.resize(samples.size(), 0);
  const LightWindow& win = map.window();
  const auto depth = map.data();
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto q = win.project(samples[k].position);
    const long idx = win.texel_index(q);
    if (idx >= 0 && q.depth > depth[static_cast<std::size_t>(idx)] + bias) mask.shaded[k] = 1;
  }
  return mask;
}

ShadingMask shade_samples(std::span<const Triangle> occluders, const LightWindow& win,
                          std::span<const SamplePoint> samples, double bias) {
  if (!(bias >= 0.0)) throw InputError("bias must be >= 0", "bias");
  std::vector<long> texels(samples.size());
  std::vector<double> sample_depth(samples.size());
  double max_depth = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto q = win.project(samples[k].position);
    texels[k] = win.texel_index(q);
    sample_depth[k] = q.depth;
    if (texels[k] >= 0) max_depth = std::max(max_depth, q.depth);
  }
  ShadingMask mask;
  mask.shaded.resize(samples.size(), 0);
  // A triangle deeper than every sample minus the bias cannot shade any of them.
  const auto depth = depth_at_texels(occluders, win, texels, max_depth - bias);
  for (std::size_t k = 0; k < samples.size(); ++k)
    if (texels[k] >= 0 && sample_depth[k] > depth[k] + bias) mask.shaded[k] = 1;
  return mask;
}

std::vector<double> cell_shaded_fractions(const ShadingMask& mask, const PVGeneratorSpec& spec) {
  const std::size_t per_cell = static_cast<std::size_t>(spec.samples_per_cell());
  if (mask.shaded.size() != spec.sample_count())
    throw InputError("mask has " + std::to_string(mask.shaded.size()) + " samples, generator '" + spec.id + "' has " +
                     std::to_string(spec.sample_count()));
  std::vector<double> out(spec.cell_count(), 0.0);
  for (std::size_t c = 0; c < out.size(); ++c) {
    std::size_t n = 0;
    for (std::size_t s = 0; s < per_cell; ++s) n += mask.shaded[c * per_cell + s];
    out[c] = static_cast<double>(n) / static_cast<double>(per_cell);
  }
  return out;
}

double intersect_watertight(const Triangle& tri, const Vec3& org, const Vec3& dir) {
  const double d[3] = {dir.x, dir.y, dir.z};
  int kz = 0;
  if (std::abs(d[1]) > std::abs(d[kz])) kz = 1;
  if (std::abs(d[2]) > std::abs(d[kz])) kz = 2;
  int kx = (kz + 1) % 3, ky = (kx + 1) % 3;
  if (d[kz] < 0.0) std::swap(kx, ky);
  const double sx = d[kx] / d[kz], sy = d[ky] / d[kz], sz = 1.0 / d[kz];

  auto rel = [&](const Vec3& p, double out[3]) {
    const Vec3 r = p - org;
    const double c[3] = {r.x, r.y, r.z};
    out[0] = c[kx] - sx * c[kz];
    out[1] = c[ky] - sy * c[kz];
    out[2] = sz * c[kz];
  };
  double a[3], b[3], c[3];
  rel(tri.v[0], a);
  rel(tri.v[1], b);
  rel(tri.v[2], c);

  const double u = c[0] * b[1] - c[1] * b[0];
  const double v = a[0] * c[1] - a[1] * c[0];
  const double w = b[0] * a[1] - b[1] * a[0];
  if ((u < 0.0 || v < 0.0 || w < 0.0) && (u > 0.0 || v > 0.0 || w > 0.0)) return -1.0;
  const double det = u + v + w;
  if (det == 0.0) return -1.0;
  const double t = (u * a[2] + v * b[2] + w * c[2]) / det;
  return t;
}

bool ray_cast_shaded(std::span<const Triangle> occluders, const Vec3& sun_dir, const Vec3& point) {
  const Vec3 dir = normalized(sun_dir);
  for (const Triangle& t : occluders)
    if (intersect_watertight(t, point, dir) > 1e-9) return true;
  return false;
}

}  // namespace helios
