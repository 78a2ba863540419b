#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include "json.hpp"

#include "helios/scene.hpp"

namespace helios {

using Json = nlohmann::json;

inline constexpr int kSceneVersion = 1;

/// Parsed OBJ files by absolute path, shared across scene loads.
using MeshCache = std::map<std::filesystem::path, std::shared_ptr<const Mesh>>;

/// Builds and finalizes a scene from its JSON document. `obj_path` entries
/// are resolved against `base_dir`; `obj_text` carries OBJ content inline.
/// Errors are InputError with a field path such as `objects[1].scale[0]`.
Scene scene_from_json(const Json& doc, const std::filesystem::path& base_dir, MeshCache* meshes = nullptr);

Scene load_scene(const std::filesystem::path& file);

/// Parses text as JSON, InputError on syntax errors.
Json parse_json(const std::string& text, const std::string& what);

std::string read_text_file(const std::filesystem::path& file);

// Pieces reused by the service for PATCH validation. `path` prefixes fields
// in error messages; empty means fields are reported bare.
Transform transform_from_json(const Json& obj, const std::string& path);
PVGeneratorSpec generator_from_json(const Json& obj, const std::string& path);
CellParams cell_params_from_json(const Json& obj, const std::string& path, const CellParams& base = {});
Site site_from_json(const Json& obj, const std::string& path);

Json generator_to_json(const PVGeneratorSpec& g);
Json cell_params_to_json(const CellParams& p);

}  // namespace helios
