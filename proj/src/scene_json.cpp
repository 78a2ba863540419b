#include "helios/scene_json.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "helios/error.hpp"

namespace helios {
namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const Json* find(const Json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double number(const Json& v, const std::string& path) {
  if (!v.is_number()) throw InputError(path + " must be a number", path);
  return v.get<double>();
}

double number_or(const Json& obj, const char* key, const std::string& path, double dflt) {
  const Json* v = find(obj, key);
  return v ? number(*v, join(path, key)) : dflt;
}

int int_or(const Json& obj, const char* key, const std::string& path, int dflt) {
  const Json* v = find(obj, key);
  if (!v) return dflt;
  if (!v->is_number_integer()) throw InputError(join(path, key) + " must be an integer", join(path, key));
  return v->get<int>();
}

bool bool_or(const Json& obj, const char* key, const std::string& path, bool dflt) {
  const Json* v = find(obj, key);
  if (!v) return dflt;
  if (!v->is_boolean()) throw InputError(join(path, key) + " must be a boolean", join(path, key));
  return v->get<bool>();
}

std::string string_req(const Json& obj, const char* key, const std::string& path) {
  const Json* v = find(obj, key);
  if (!v || !v->is_string()) throw InputError(join(path, key) + " must be a string", join(path, key));
  return v->get<std::string>();
}

std::array<double, 3> triple_or(const Json& obj, const char* key, const std::string& path, std::array<double, 3> dflt) {
  const Json* v = find(obj, key);
  if (!v) return dflt;
  const std::string p = join(path, key);
  if (!v->is_array() || v->size() != 3) throw InputError(p + " must be an array of 3 numbers", p);
  std::array<double, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) out[i] = number((*v)[i], index(p, i));
  return out;
}

Vec3 vec3(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }

void require_object(const Json& v, const std::string& path) {
  if (!v.is_object()) throw InputError((path.empty() ? std::string("document") : path) + " must be an object", path);
}

}  // namespace

std::string read_text_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InputError("cannot read file '" + file.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(what + ": invalid JSON (" + e.what() + ")");
  }
}

Transform transform_from_json(const Json& obj, const std::string& path) {
  require_object(obj, path);
  const auto t = triple_or(obj, "translation_m", path, {0, 0, 0});
  const auto r = triple_or(obj, "rotation_deg", path, {0, 0, 0});
  const auto s = triple_or(obj, "scale", path, {1, 1, 1});
  try {
    return Transform(vec3(t), r, vec3(s));
  } catch (const InputError& e) {
    const std::string field = join(path, e.field());
    throw InputError(field + " must be > 0", field);
  }
}

Site site_from_json(const Json& obj, const std::string& path) {
  require_object(obj, path);
  Site s;
  const Json* lat = find(obj, "lat_deg");
  const Json* lon = find(obj, "lon_deg");
  if (!lat) throw InputError(join(path, "lat_deg") + " is required", join(path, "lat_deg"));
  if (!lon) throw InputError(join(path, "lon_deg") + " is required", join(path, "lon_deg"));
  s.latitude_deg = number(*lat, join(path, "lat_deg"));
  s.longitude_deg = number(*lon, join(path, "lon_deg"));
  s.altitude_m = number_or(obj, "altitude_m", path, 0.0);
  s.turbidity = number_or(obj, "turbidity", path, 3.0);
  s.albedo = number_or(obj, "albedo", path, 0.2);
  validate(s, path);
  return s;
}

CellParams cell_params_from_json(const Json& obj, const std::string& path, const CellParams& base) {
  require_object(obj, path);
  CellParams p = base;
  p.iph_stc_a = number_or(obj, "iph_stc_a", path, p.iph_stc_a);
  p.voc_stc_v = number_or(obj, "voc_stc_v", path, p.voc_stc_v);
  p.n = number_or(obj, "n", path, p.n);
  p.rs_ohm = number_or(obj, "rs_ohm", path, p.rs_ohm);
  p.rsh_ohm = number_or(obj, "rsh_ohm", path, p.rsh_ohm);
  p.alpha_isc_per_c = number_or(obj, "alpha_isc_per_c", path, p.alpha_isc_per_c);
  p.bypass_drop_v = number_or(obj, "bypass_drop_v", path, p.bypass_drop_v);
  p.noct_c = number_or(obj, "noct_c", path, p.noct_c);
  p.area_m2 = number_or(obj, "area_m2", path, p.area_m2);
  if (const Json* tm = find(obj, "temperature_model")) {
    const std::string f = join(path, "temperature_model");
    if (*tm == "constant") p.temperature_model = TemperatureModel::Constant;
    else if (*tm == "noct") p.temperature_model = TemperatureModel::Noct;
    else throw InputError(f + " must be \"constant\" or \"noct\"", f);
  }
  validate(p, path);
  return p;
}

Json cell_params_to_json(const CellParams& p) {
  return Json{{"iph_stc_a", p.iph_stc_a},
              {"voc_stc_v", p.voc_stc_v},
              {"n", p.n},
              {"rs_ohm", p.rs_ohm},
              {"rsh_ohm", p.rsh_ohm},
              {"alpha_isc_per_c", p.alpha_isc_per_c},
              {"bypass_drop_v", p.bypass_drop_v},
              {"noct_c", p.noct_c},
              {"area_m2", p.area_m2},
              {"temperature_model", p.temperature_model == TemperatureModel::Noct ? "noct" : "constant"}};
}

PVGeneratorSpec generator_from_json(const Json& obj, const std::string& path) {
  require_object(obj, path);
  PVGeneratorSpec g;
  g.id = string_req(obj, "id", path);
  g.origin = vec3(triple_or(obj, "origin_m", path, {0, 0, 0}));
  if (const Json* m = find(obj, "mode")) {
    if (*m == "fixed") g.mode = MountMode::Fixed;
    else if (*m == "two_axis") g.mode = MountMode::TwoAxis;
    else throw InputError(join(path, "mode") + " must be \"fixed\" or \"two_axis\"", join(path, "mode"));
  }
  g.azimuth_deg = number_or(obj, "azimuth_deg", path, g.azimuth_deg);
  g.tilt_deg = number_or(obj, "tilt_deg", path, g.tilt_deg);
  g.module_rows = int_or(obj, "module_rows", path, g.module_rows);
  g.module_cols = int_or(obj, "module_cols", path, g.module_cols);
  g.module_w_m = number_or(obj, "module_w_m", path, g.module_w_m);
  g.module_h_m = number_or(obj, "module_h_m", path, g.module_h_m);
  g.gap_row_m = number_or(obj, "gap_row_m", path, g.gap_row_m);
  g.gap_col_m = number_or(obj, "gap_col_m", path, g.gap_col_m);
  g.cell_rows = int_or(obj, "cell_rows", path, g.cell_rows);
  g.cell_cols = int_or(obj, "cell_cols", path, g.cell_cols);
  g.modules_per_string = int_or(obj, "modules_per_string", path, g.module_rows * g.module_cols);
  g.strings_parallel = int_or(obj, "strings_parallel", path, 1);
  g.subdivision = int_or(obj, "subdivision", path, g.subdivision);
  g.self_occluding = bool_or(obj, "self_occluding", path, false);

  if (const Json* subs = find(obj, "substrings")) {
    const std::string sp = join(path, "substrings");
    if (!subs->is_array()) throw InputError(sp + " must be an array of arrays", sp);
    for (std::size_t i = 0; i < subs->size(); ++i) {
      const Json& s = (*subs)[i];
      if (!s.is_array()) throw InputError(index(sp, i) + " must be an array", index(sp, i));
      std::vector<int> cells;
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (!s[k].is_number_integer()) throw InputError(index(index(sp, i), k) + " must be an integer", index(index(sp, i), k));
        cells.push_back(s[k].get<int>());
      }
      g.substrings.push_back(std::move(cells));
    }
  } else if (g.cell_rows > 0 && g.cell_cols > 0) {
    g.substrings = contiguous_substrings(g.cells_per_module(), 1);
  }
  if (const Json* cp = find(obj, "cell_params")) g.cell_params = cell_params_from_json(*cp, join(path, "cell_params"));
  validate(g, path);
  return g;
}

Json generator_to_json(const PVGeneratorSpec& g) {
  Json j{{"id", g.id},
         {"origin_m", {g.origin.x, g.origin.y, g.origin.z}},
         {"mode", g.mode == MountMode::TwoAxis ? "two_axis" : "fixed"},
         {"azimuth_deg", g.azimuth_deg},
         {"tilt_deg", g.tilt_deg},
         {"module_rows", g.module_rows},
         {"module_cols", g.module_cols},
         {"module_w_m", g.module_w_m},
         {"module_h_m", g.module_h_m},
         {"gap_row_m", g.gap_row_m},
         {"gap_col_m", g.gap_col_m},
         {"cell_rows", g.cell_rows},
         {"cell_cols", g.cell_cols},
         {"substrings", g.substrings},
         {"modules_per_string", g.modules_per_string},
         {"strings_parallel", g.strings_parallel},
         {"subdivision", g.subdivision},
         {"self_occluding", g.self_occluding}};
  if (g.cell_params) j["cell_params"] = cell_params_to_json(*g.cell_params);
  return j;
}

Scene scene_from_json(const Json& doc, const std::filesystem::path& base_dir, MeshCache* meshes) {
  require_object(doc, "");
  const int version = int_or(doc, "version", "", kSceneVersion);
  if (version != kSceneVersion)
    throw InputError("unsupported scene version " + std::to_string(version), "version");

  Scene scene;
  const Json* site = find(doc, "site");
  if (!site) throw InputError("site is required", "site");
  scene.site = site_from_json(*site, "site");
  if (const Json* cp = find(doc, "cell_params")) scene.cell_params = cell_params_from_json(*cp, "cell_params");
  scene.depth_resolution = int_or(doc, "depth_resolution", "", kDefaultDepthResolution);

  MeshCache local;
  MeshCache& cache = meshes ? *meshes : local;
  if (const Json* objs = find(doc, "objects")) {
    if (!objs->is_array()) throw InputError("objects must be an array", "objects");
    for (std::size_t i = 0; i < objs->size(); ++i) {
      const Json& o = (*objs)[i];
      const std::string path = index("objects", i);
      require_object(o, path);
      SceneObject obj;
      obj.id = string_req(o, "id", path);
      obj.transform = transform_from_json(o, path);
      obj.visible = bool_or(o, "visible", path, true);
      if (const Json* text = find(o, "obj_text")) {
        if (!text->is_string()) throw InputError(path + ".obj_text must be a string", path + ".obj_text");
        try {
          obj.mesh = std::make_shared<const Mesh>(parse_obj(text->get<std::string>()));
        } catch (const InputError& e) {
          throw InputError(path + " '" + obj.id + "': " + e.what(), path + ".obj_text");
        }
      } else {
        const std::filesystem::path rel = string_req(o, "obj_path", path);
        const std::filesystem::path file = rel.is_absolute() ? rel : base_dir / rel;
        auto& mesh = cache[file];
        if (!mesh) {
          if (!std::filesystem::is_regular_file(file))
            throw InputError("OBJ file not found: " + file.string(), path + ".obj_path");
          try {
            mesh = std::make_shared<const Mesh>(parse_obj(read_text_file(file)));
          } catch (const InputError& e) {
            throw InputError(file.string() + ": " + e.what(), path + ".obj_path");
          }
        }
        obj.mesh = mesh;
      }
      scene.objects.push_back(std::move(obj));
    }
  }
  if (const Json* gens = find(doc, "generators")) {
    if (!gens->is_array()) throw InputError("generators must be an array", "generators");
    for (std::size_t i = 0; i < gens->size(); ++i) scene.generators.push_back(generator_from_json((*gens)[i], index("generators", i)));
  }
  finalize(scene);
  return scene;
}

Scene load_scene(const std::filesystem::path& file) {
  if (!std::filesystem::is_regular_file(file)) throw InputError("scene file not found: " + file.string(), "scene");
  const Json doc = parse_json(read_text_file(file), file.string());
  return scene_from_json(doc, file.parent_path());
}

}  // namespace helios
