#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "helios/generator.hpp"
#include "helios/mesh.hpp"
#include "helios/solar.hpp"

namespace helios {

struct SceneObject {
  std::string id;
  std::shared_ptr<const Mesh> mesh;  // object space
  Transform transform;
  bool visible = true;
};

inline constexpr int kDefaultDepthResolution = 2048;

/// A scene snapshot. Build it field by field, then call finalize(); treat it
/// as immutable afterwards (share it as shared_ptr<const Scene>).
struct Scene {
  Site site;
  std::vector<SceneObject> objects;
  std::vector<PVGeneratorSpec> generators;
  CellParams cell_params;  // used by generators without their own
  int depth_resolution = kDefaultDepthResolution;

  // Filled by finalize().
  std::vector<Triangle> object_triangles;  // world space, visible objects only
  std::vector<std::string> warnings;

  const PVGeneratorSpec& generator(std::string_view id) const;
  const CellParams& params_for(const PVGeneratorSpec& g) const { return g.cell_params ? *g.cell_params : cell_params; }
};

/// Validates ids, site, generators and parameters (InputError with a field
/// path), then transforms the visible meshes into world space. Degenerate
/// triangles are dropped and reported in `warnings`.
void finalize(Scene& scene);

/// Visible object triangles plus the panel quads of every other generator
/// flagged self_occluding. Tracker quads need the sun position; without it
/// they are left out. InputError for an unknown target.
std::vector<Triangle> scene_occluders(const Scene& scene, std::string_view target,
                                      const std::optional<SunPosition>& sun = std::nullopt);

/// True when scene_occluders(target) adds anything to object_triangles.
bool has_panel_occluders(const Scene& scene, std::string_view target);

}  // namespace helios
