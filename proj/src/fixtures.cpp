#include "helios/fixtures.hpp"

#include <cmath>
#include <random>

#include "helios/error.hpp"
#include "helios/primitives.hpp"
#include "helios/report_io.hpp"

namespace helios::fixtures {
namespace {

using namespace primitives;

Json object(const std::string& id) {
  return Json{{"id", id}, {"obj_path", id + ".obj"}, {"translation_m", {0, 0, 0}}, {"rotation_deg", {0, 0, 0}},
              {"scale", {1, 1, 1}}, {"visible", true}};
}

std::size_t count_triangles(const Fixture& f) {
  std::size_t n = 0;
  for (const auto& [name, m] : f.meshes) n += m.triangles.size();
  return n;
}

Mesh bike() {
  Mesh m;
  const Vec3 ex{1, 0, 0}, ez{0, 0, 1};
  const double r = 0.34, y = -1.0;
  const Vec3 rear{-0.52, y, r}, front{0.52, y, r};
  merge(m, torus(rear, ex, ez, r, 0.025, 32, 6));
  merge(m, torus(front, ex, ez, r, 0.025, 32, 6));
  const Vec3 crank{-0.05, y, 0.30}, seat_node{-0.22, y, 0.82}, head{0.40, y, 0.86};
  merge(m, bar(rear, crank, 0.03));
  merge(m, bar(rear, seat_node, 0.03));
  merge(m, bar(crank, seat_node, 0.035));
  merge(m, bar(crank, head, 0.035));
  merge(m, bar(seat_node, head, 0.035));
  merge(m, bar(head, front, 0.03));
  merge(m, bar(head, head + Vec3{-0.05, 0, 0.18}, 0.03));
  merge(m, bar(head + Vec3{-0.05, -0.25, 0.18}, head + Vec3{-0.05, 0.25, 0.18}, 0.03));  // handlebar
  merge(m, bar(seat_node, seat_node + Vec3{-0.03, 0, 0.12}, 0.025));
  merge(m, box(seat_node + Vec3{-0.16, -0.07, 0.12}, {0.26, 0.14, 0.05}));  // saddle
  return m;
}

PVGeneratorSpec module_36(const std::string& id, int rows, int cols) {
  PVGeneratorSpec g;
  g.id = id;
  g.module_rows = rows;
  g.module_cols = cols;
  g.cell_rows = 9;
  g.cell_cols = 4;
  g.module_w_m = 0.6;
  g.module_h_m = 1.35;
  g.gap_col_m = 0.02;
  g.gap_row_m = 0.02;
  g.substrings = contiguous_substrings(36, 2);
  g.modules_per_string = rows * cols;
  g.strings_parallel = 1;
  return g;
}

}  // namespace

Fixture wall_bike() {
  Fixture f;
  f.meshes.emplace_back("wall", box({-5.0, 0.0, 0.0}, {10.0, 0.25, 3.0}));
  f.meshes.emplace_back("bike", bike());

  PVGeneratorSpec g = module_36("facade", 2, 6);
  // Landscape modules on the facade: 4 rows × 9 columns of cells.
  g.cell_rows = 4;
  g.cell_cols = 9;
  g.module_w_m = 1.35;
  g.module_h_m = 0.6;
  g.azimuth_deg = 180.0;
  g.tilt_deg = 90.0;
  g.origin = {0.0, -0.05, 0.3 + 0.5 * g.height_m()};
  g.subdivision = 3;

  f.scene = Json{{"version", kSceneVersion},
                 {"site", {{"lat_deg", 52.37}, {"lon_deg", 4.90}, {"altitude_m", 0.0}, {"turbidity", 3.0}}},
                 {"objects", {object("wall"), object("bike")}},
                 {"generators", {generator_to_json(g)}}};
  return f;
}

Fixture house_tree_streetlight(std::uint64_t seed) {
  Fixture f;
  Mesh house = box({-10.0, -4.0, 0.0}, {20.0, 8.0, 6.0});
  merge(house, box({-15.0, 2.0, 0.0}, {7.0, 9.0, 14.0}));  // west wing
  f.meshes.emplace_back("house", std::move(house));

  Mesh light = cylinder({6.5, -4.5, 0.0}, 0.09, 8.5, 16);
  merge(light, bar({6.5, -4.5, 8.4}, {5.3, -3.9, 8.4}, 0.08));
  merge(light, box({4.95, -4.15, 8.2}, {0.55, 0.35, 0.22}));
  f.meshes.emplace_back("streetlight", std::move(light));

  // Trunk, branches and a leaf canopy filled up to the triangle budget.
  const Vec3 base{8.5, -9.5, 0.0};
  const Vec3 crown{base.x, base.y, 8.5};
  const Vec3 radii{3.2, 3.2, 2.8};
  Mesh tree = cylinder(base, 0.25, 6.5, 20);
  for (int k = 0; k < 6; ++k) {
    const double a = k * kPi / 3.0;
    merge(tree, bar({base.x, base.y, 5.5}, crown + Vec3{2.0 * std::cos(a), 2.0 * std::sin(a), 0.5}, 0.08));
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const std::size_t fixed = count_triangles(f) + tree.triangles.size();
  if (fixed >= kHouseTriangles) throw NumericError("house fixture exceeds its triangle budget");
  const std::size_t leaves = kHouseTriangles - fixed;
  tree.vertices.reserve(tree.vertices.size() + 3 * leaves);
  for (std::size_t i = 0; i < leaves; ++i) {
    Vec3 p;
    do p = {unit(rng), unit(rng), unit(rng)};
    while (dot(p, p) > 1.0);
    const Vec3 c = crown + Vec3{p.x * radii.x, p.y * radii.y, p.z * radii.z};
    Vec3 a, b;
    do {
      a = {unit(rng), unit(rng), unit(rng)};
      b = {unit(rng), unit(rng), unit(rng)};
    } while (length(cross(a, b)) < 0.2);
    const auto v0 = static_cast<std::uint32_t>(tree.vertices.size());
    tree.vertices.push_back(c);
    tree.vertices.push_back(c + a * 0.12);
    tree.vertices.push_back(c + b * 0.12);
    tree.triangles.push_back({v0, v0 + 1, v0 + 2});
  }
  f.meshes.emplace_back("tree", std::move(tree));

  PVGeneratorSpec g = module_36("roof", 3, 13);
  g.azimuth_deg = 180.0;
  g.tilt_deg = 25.0;
  g.subdivision = 1;
  const double rise = 0.5 * g.height_m() * std::sin(deg2rad(g.tilt_deg));
  g.origin = {0.0, 0.0, 6.25 + rise};

  f.scene = Json{{"version", kSceneVersion},
                 {"site", {{"lat_deg", 40.42}, {"lon_deg", -3.70}, {"altitude_m", 650.0}, {"turbidity", 3.0}}},
                 {"objects", {object("house"), object("tree"), object("streetlight")}},
                 {"generators", {generator_to_json(g)}}};
  return f;
}

std::filesystem::path write(const Fixture& f, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, mesh] : f.meshes) write_file(dir / (name + ".obj"), to_obj(mesh));
  const auto path = dir / "scene.json";
  write_file(path, f.scene.dump(2) + "\n");
  return path;
}

Scene load(const Fixture& f) {
  // Same OBJ text as write(), so both routes give identical scenes.
  Json doc = f.scene;
  for (auto& obj : doc["objects"]) {
    const std::string file = obj["obj_path"].get<std::string>();
    for (const auto& [name, mesh] : f.meshes)
      if (name + ".obj" == file) obj["obj_text"] = to_obj(mesh);
    obj.erase("obj_path");
  }
  return scene_from_json(doc, {});
}

}  // namespace helios::fixtures
