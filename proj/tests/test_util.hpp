#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "helios/generator.hpp"
#include "helios/mesh.hpp"
#include "helios/primitives.hpp"
#include "helios/scene_json.hpp"

namespace testutil {

using helios::Json;

inline Json object_json(const std::string& id, const helios::Mesh& mesh) {
  return Json{{"id", id}, {"obj_text", helios::to_obj(mesh)}};
}

// One flat 2×2 m module of 4×4 cells lying at z, centered on (0, 0).
inline Json flat_generator(const std::string& id = "g", double z = 0.0, int subdivision = 3) {
  return Json{{"id", id},
              {"origin_m", {0.0, 0.0, z}},
              {"azimuth_deg", 180.0},
              {"tilt_deg", 0.0},
              {"module_rows", 1},
              {"module_cols", 1},
              {"module_w_m", 2.0},
              {"module_h_m", 2.0},
              {"cell_rows", 4},
              {"cell_cols", 4},
              {"substrings", helios::contiguous_substrings(16, 2)},
              {"subdivision", subdivision}};
}

inline Json site_json(double lat = 40.0, double lon = 0.0) {
  return Json{{"lat_deg", lat}, {"lon_deg", lon}, {"altitude_m", 0.0}};
}

inline Json scene_doc(Json objects, Json generators, int depth_resolution = 512) {
  return Json{{"version", helios::kSceneVersion},
              {"site", site_json()},
              {"depth_resolution", depth_resolution},
              {"objects", std::move(objects)},
              {"generators", std::move(generators)}};
}

inline helios::Scene build(const Json& doc) { return helios::scene_from_json(doc, std::filesystem::current_path()); }

// A fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("helios-test-" + name + "-" + std::to_string(std::random_device{}()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testutil

namespace testutil {

// The same world, uniformly scaled by f about the origin.
inline Json scaled(Json doc, double f) {
  for (auto& o : doc["objects"]) {
    Json s = o.value("scale", Json{1.0, 1.0, 1.0});
    Json t = o.value("translation_m", Json{0.0, 0.0, 0.0});
    for (int k = 0; k < 3; ++k) {
      s[k] = s[k].get<double>() * f;
      t[k] = t[k].get<double>() * f;
    }
    o["scale"] = s;
    o["translation_m"] = t;
  }
  for (auto& g : doc["generators"]) {
    for (auto& c : g["origin_m"]) c = c.get<double>() * f;
    for (const char* k : {"module_w_m", "module_h_m", "gap_row_m", "gap_col_m"})
      if (g.contains(k)) g[k] = g[k].get<double>() * f;
  }
  return doc;
}

}  // namespace testutil
