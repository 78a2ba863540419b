#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "helios/depth_map.hpp"
#include "helios/generator.hpp"
#include "helios/time.hpp"

namespace helios {

struct ShadingMask {
  std::string generator_id;
  Instant instant{};
  std::vector<std::uint8_t> shaded;  // one entry per sample, 1 = shaded

  std::size_t shaded_count() const;
};

/// Slope-scaled acne guard: 2 texels / max(0.1, cos θ), capped at 4 texels,
/// θ being the angle between the sun and the receiving plane's normal.
double default_bias(double texel, const Vec3& sun_dir, const Vec3& plane_normal);

/// A sample is shaded iff its depth exceeds the texel depth + bias. Samples
/// outside the window are unshaded.
ShadingMask classify(const DepthMap& map, std::span<const SamplePoint> samples, double bias);

/// classify(build_depth_map(...)) without materializing the full map: depths
/// are evaluated only at the texels holding samples.
ShadingMask shade_samples(std::span<const Triangle> occluders, const LightWindow& window,
                          std::span<const SamplePoint> samples, double bias);

/// Per cell (module-major): shaded samples / subdivision².
std::vector<double> cell_shaded_fractions(const ShadingMask& mask, const PVGeneratorSpec& spec);

/// True iff a triangle blocks the ray from `point` toward the sun at
/// t > 1e-9 m. Watertight intersection: points on an edge or vertex count as
/// hits, so a ray through a shared edge is blocked exactly once per query.
bool ray_cast_shaded(std::span<const Triangle> occluders, const Vec3& sun_dir, const Vec3& point);

/// Ray parameter of the hit, or a negative value on a miss.
double intersect_watertight(const Triangle& tri, const Vec3& origin, const Vec3& dir);

}  // namespace helios
