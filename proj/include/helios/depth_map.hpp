#pragma once

#include <span>
#include <vector>

#include "helios/mesh.hpp"

namespace helios {

/// Orthographic view from the sun. `w` = −sun_dir is the depth axis, so depth
/// grows away from the sun; `u`, `v` span the image plane. Texels are square.
struct LightWindow {
  Vec3 origin;  // footprint center; depth 0
  Vec3 u, v, w;
  double u0 = 0.0, v0 = 0.0;  // lower-left corner of the window in (u, v)
  double texel = 1.0;         // world size of one texel (m)
  int width = 1, height = 1;

  struct Projected {
    double x, y;  // texel units, texel (i, j) has its center at (i + 0.5, j + 0.5)
    double depth;
  };
  Projected project(const Vec3& p) const;
  /// Texel index containing the point, or -1 outside the window.
  long texel_index(const Projected& q) const;
};

/// Fits a width × height window around the footprint's projection, inflated
/// by two texels on each side. DomainError if sun_dir points below the
/// horizon, InputError if the footprint projects to a point.
LightWindow make_light_window(std::span<const Vec3> footprint, const Vec3& sun_dir, int width, int height);

class DepthMap {
 public:
  explicit DepthMap(const LightWindow& window);

  const LightWindow& window() const { return window_; }
  int width() const { return window_.width; }
  int height() const { return window_.height; }
  double texel_size() const { return window_.texel; }
  double at(int i, int j) const { return depth_[static_cast<std::size_t>(j) * window_.width + i]; }
  std::span<const double> data() const { return depth_; }
  std::span<double> data() { return depth_; }

 private:
  LightWindow window_;
  std::vector<double> depth_;  // row-major, row 0 at v0
};

/// Rasterizes every triangle into a fresh map (top-left fill rule at texel
/// centers, minimum depth wins).
DepthMap build_depth_map(std::span<const Triangle> occluders, const Vec3& sun_dir, std::span<const Vec3> footprint,
                         int width, int height);

/// Same per-texel values as build_depth_map, evaluated only at `texels`
/// (indices from LightWindow::texel_index, -1 gives +inf). Triangles entirely
/// deeper than `max_depth` are skipped since they cannot change a depth test
/// against points up to that depth.
std::vector<double> depth_at_texels(std::span<const Triangle> occluders, const LightWindow& window,
                                    std::span<const long> texels, double max_depth);

}  // namespace helios
