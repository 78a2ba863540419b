#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "helios/vec3.hpp"

namespace helios {

/// World-space triangle, used wherever topology no longer matters.
struct Triangle {
  std::array<Vec3, 3> v;
};

inline double area(const Triangle& t) { return 0.5 * length(cross(t.v[1] - t.v[0], t.v[2] - t.v[0])); }

// Triangles below this area (m²) are treated as degenerate.
inline constexpr double kDegenerateArea = 1e-12;

struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::uint32_t, 3>> triangles;

  Triangle triangle(std::size_t i) const {
    const auto& t = triangles[i];
    return {{vertices[t[0]], vertices[t[1]], vertices[t[2]]}};
  }
};

/// Parses the `v` / `f` subset of Wavefront OBJ. Polygons are fan-triangulated,
/// `v/vt/vn` tokens are reduced to their vertex index, negative indices are
/// relative to the vertices read so far. Throws InputError naming the line.
Mesh parse_obj(std::string_view text);

/// Writes vertices and faces only; the inverse of parse_obj for valid meshes.
std::string to_obj(const Mesh& mesh);

/// Scale, then rotate (Euler ZYX, degrees), then translate.
class Transform {
 public:
  Transform() = default;
  /// rotation_zyx_deg = {about Z, about Y, about X}. Throws InputError when a
  /// scale component is not strictly positive.
  Transform(Vec3 translation, std::array<double, 3> rotation_zyx_deg, Vec3 scale);

  static Transform translate(Vec3 t) { return Transform(t, {0, 0, 0}, {1, 1, 1}); }

  Vec3 apply(const Vec3& p) const;
  Vec3 apply_inverse(const Vec3& p) const;
  bool is_identity() const { return identity_; }

  const Vec3& translation() const { return translation_; }
  const std::array<double, 3>& rotation_zyx_deg() const { return rotation_deg_; }
  const Vec3& scale() const { return scale_; }

 private:
  Vec3 translation_{};
  std::array<double, 3> rotation_deg_{0, 0, 0};
  Vec3 scale_{1, 1, 1};
  std::array<std::array<double, 3>, 3> rot_{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  bool identity_ = true;
};

/// Maps every vertex through `t`; topology is untouched. The identity transform
/// returns bit-identical vertices.
Mesh transform_mesh(const Mesh& mesh, const Transform& t);

/// Collects the world-space triangles of a mesh, skipping degenerate ones.
/// Returns the number of triangles dropped.
std::size_t append_triangles(const Mesh& mesh, std::vector<Triangle>& out);

}  // namespace helios
