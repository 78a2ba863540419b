#include "helios/scene.hpp"

#include <set>

#include "helios/error.hpp"

namespace helios {

const PVGeneratorSpec& Scene::generator(std::string_view id) const {
  for (const auto& g : generators)
    if (g.id == id) return g;
  throw InputError("unknown generator '" + std::string(id) + "'", "generator");
}

void finalize(Scene& scene) {
  validate(scene.site);
  validate(scene.cell_params);
  if (scene.depth_resolution < 5)
    throw InputError("depth_resolution must be at least 5", "depth_resolution");

  std::set<std::string, std::less<>> ids;
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    const auto& o = scene.objects[i];
    const std::string path = "objects[" + std::to_string(i) + "]";
    if (o.id.empty()) throw InputError(path + ": id must not be empty", path + ".id");
    if (!ids.insert(o.id).second) throw InputError("duplicate object id '" + o.id + "'", path + ".id");
    if (!o.mesh) throw InputError("object '" + o.id + "' has no mesh", path);
  }
  ids.clear();
  for (std::size_t i = 0; i < scene.generators.size(); ++i) {
    const auto& g = scene.generators[i];
    const std::string path = "generators[" + std::to_string(i) + "]";
    validate(g, path);
    if (!ids.insert(g.id).second) throw InputError("duplicate generator id '" + g.id + "'", path + ".id");
    if (g.cell_params) validate(*g.cell_params, path + ".cell_params");
  }

  scene.object_triangles.clear();
  scene.warnings.clear();
  for (const auto& o : scene.objects) {
    if (!o.visible) continue;
    const std::size_t dropped = append_triangles(transform_mesh(*o.mesh, o.transform), scene.object_triangles);
    if (dropped > 0)
      scene.warnings.push_back("object '" + o.id + "': dropped " + std::to_string(dropped) + " degenerate triangle(s)");
  }
}

bool has_panel_occluders(const Scene& scene, std::string_view target) {
  for (const auto& g : scene.generators)
    if (g.id != target && g.self_occluding) return true;
  return false;
}

std::vector<Triangle> scene_occluders(const Scene& scene, std::string_view target, const std::optional<SunPosition>& sun) {
  (void)scene.generator(target);
  std::vector<Triangle> out = scene.object_triangles;
  for (const auto& g : scene.generators) {
    if (g.id == target || !g.self_occluding) continue;
    if (g.mode == MountMode::TwoAxis && !(sun && sun->zenith_deg < 90.0)) continue;
    const Vec3 n = g.mode == MountMode::TwoAxis ? tracker_normal(g, *sun) : fixed_normal(g.azimuth_deg, g.tilt_deg);
    const auto quads = panel_quads(g, n);
    out.insert(out.end(), quads.begin(), quads.end());
  }
  return out;
}

}  // namespace helios
