#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "helios/scene_json.hpp"

// Synthetic stand-ins for the published scenes, built from primitives.
namespace helios::fixtures {

struct Fixture {
  Json scene;  // objects reference meshes by obj_path "<name>.obj"
  std::vector<std::pair<std::string, Mesh>> meshes;
};

/// Amsterdam, south facade with 12 modules of 36 cells (two bypass diodes
/// each) wired in series, a wall behind it and a bike 1 m in front.
Fixture wall_bike();
/// An instant at which the bike shadow falls on the facade generator.
inline constexpr const char* kWallBikeInstant = "2023-12-21T11:40:00Z";

/// Madrid, 39 modules (3×13) of 36 cells on a flat roof, a taller wing to the
/// north-west, a tree and a streetlight to the south-east. 80,000 triangles.
Fixture house_tree_streetlight(std::uint64_t seed = 7);
inline constexpr std::size_t kHouseTriangles = 80000;

/// Writes `scene.json` and the OBJ files into `dir`; returns the scene path.
std::filesystem::path write(const Fixture& f, const std::filesystem::path& dir);

/// The scene with meshes supplied in memory.
Scene load(const Fixture& f);

}  // namespace helios::fixtures
