#include "helios/generator.hpp"

#include <cmath>

#include "helios/error.hpp"

namespace helios {
namespace {

struct LocalLayout {
  PlaneBasis basis;
  Vec3 origin;
  double x0;  // left edge in plane coordinates
  double y0;  // bottom edge

  Vec3 at(double x, double y) const { return origin + basis.right * (x0 + x) + basis.up * (y0 + y); }
};

LocalLayout layout(const PVGeneratorSpec& spec, const Vec3& normal) {
  return {plane_basis(normal, spec.azimuth_deg), spec.origin, -0.5 * spec.width_m(), -0.5 * spec.height_m()};
}

}  // namespace

Vec3 tracker_normal(const PVGeneratorSpec& spec, const SunPosition& pos) {
  if (spec.mode == MountMode::TwoAxis) return sun_direction(pos);
  return fixed_normal(spec.azimuth_deg, spec.tilt_deg);
}

ArrayWiring wiring_of(const PVGeneratorSpec& spec) {
  return {spec.cells_per_module(), spec.substrings, spec.module_count(), spec.modules_per_string,
          spec.strings_parallel};
}

std::vector<std::vector<int>> contiguous_substrings(int cells, int groups) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(groups));
  for (int c = 0; c < cells; ++c) out[static_cast<std::size_t>(c * groups / cells)].push_back(c);
  return out;
}

void validate(const PVGeneratorSpec& spec, const std::string& path) {
  auto positive_int = [&](int v, const char* name) {
    if (v < 1) throw InputError(path + ": " + name + " must be >= 1", path + "." + name);
  };
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InputError(path + ": " + name + " must be > 0", path + "." + name);
  };
  auto non_negative = [&](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InputError(path + ": " + name + " must be >= 0", path + "." + name);
  };
  if (spec.id.empty()) throw InputError(path + ": id must not be empty", path + ".id");
  positive_int(spec.module_rows, "module_rows");
  positive_int(spec.module_cols, "module_cols");
  positive_int(spec.cell_rows, "cell_rows");
  positive_int(spec.cell_cols, "cell_cols");
  positive_int(spec.subdivision, "subdivision");
  positive_int(spec.modules_per_string, "modules_per_string");
  positive_int(spec.strings_parallel, "strings_parallel");
  positive(spec.module_w_m, "module_w_m");
  positive(spec.module_h_m, "module_h_m");
  non_negative(spec.gap_row_m, "gap_row_m");
  non_negative(spec.gap_col_m, "gap_col_m");
  if (!is_finite(spec.origin)) throw InputError(path + ": origin must be finite", path + ".origin_m");
  if (spec.mode == MountMode::Fixed && !(spec.tilt_deg >= 0.0 && spec.tilt_deg <= 180.0))
    throw InputError(path + ": tilt_deg must be in [0, 180]", path + ".tilt_deg");
  if (!std::isfinite(spec.azimuth_deg)) throw InputError(path + ": azimuth_deg must be finite", path + ".azimuth_deg");
  if (spec.modules_per_string * spec.strings_parallel != spec.module_count())
    throw InputError(path + " '" + spec.id + "': modules_per_string x strings_parallel = " +
                         std::to_string(spec.modules_per_string * spec.strings_parallel) + " but the grid has " +
                         std::to_string(spec.module_count()) + " modules",
                     path + ".modules_per_string");

  const int cells = spec.cells_per_module();
  std::vector<int> seen(static_cast<std::size_t>(cells), -1);
  for (std::size_t s = 0; s < spec.substrings.size(); ++s) {
    const std::string spath = path + ".substrings[" + std::to_string(s) + "]";
    if (spec.substrings[s].empty()) throw InputError(path + " '" + spec.id + "': empty substring", spath);
    for (const int c : spec.substrings[s]) {
      if (c < 0 || c >= cells)
        throw InputError(path + " '" + spec.id + "': cell " + std::to_string(c) + " out of range (module has " +
                             std::to_string(cells) + " cells)",
                         spath);
      if (seen[static_cast<std::size_t>(c)] >= 0)
        throw InputError(path + " '" + spec.id + "': cell " + std::to_string(c) + " appears in more than one substring",
                         spath);
      seen[static_cast<std::size_t>(c)] = static_cast<int>(s);
    }
  }
  for (int c = 0; c < cells; ++c) {
    if (seen[static_cast<std::size_t>(c)] < 0)
      throw InputError(path + " '" + spec.id + "': cell " + std::to_string(c) + " is not covered by any substring",
                       path + ".substrings");
  }
  if (spec.cell_params) validate(*spec.cell_params, path + ".cell_params");
}

Vec3 fixed_normal(double azimuth_deg, double tilt_deg) {
  const double az = deg2rad(azimuth_deg);
  const double tilt = deg2rad(tilt_deg);
  return {std::sin(tilt) * std::sin(az), std::sin(tilt) * std::cos(az), std::cos(tilt)};
}

PlaneBasis plane_basis(const Vec3& normal, double fallback_azimuth_deg) {
  const Vec3 n = normalized(normal);
  Vec3 right = cross(Vec3{0, 0, 1}, n);
  if (length(right) < 1e-9) {
    const double az = deg2rad(fallback_azimuth_deg);
    right = {-std::cos(az), std::sin(az), 0.0};
  }
  right = normalized(right);
  return {n, right, cross(n, right)};
}

std::vector<SamplePoint> generator_samples(const PVGeneratorSpec& spec, const Vec3& plane_normal) {
  const LocalLayout lay = layout(spec, plane_normal);
  const double cell_w = spec.module_w_m / spec.cell_cols;
  const double cell_h = spec.module_h_m / spec.cell_rows;
  const int sub = spec.subdivision;

  std::vector<SamplePoint> out;
  out.reserve(spec.sample_count());
  for (int mr = 0; mr < spec.module_rows; ++mr)
    for (int mc = 0; mc < spec.module_cols; ++mc) {
      const int module = mr * spec.module_cols + mc;
      const double mx = mc * (spec.module_w_m + spec.gap_col_m);
      const double my = mr * (spec.module_h_m + spec.gap_row_m);
      for (int cr = 0; cr < spec.cell_rows; ++cr)
        for (int cc = 0; cc < spec.cell_cols; ++cc) {
          const int cell = cr * spec.cell_cols + cc;
          for (int sr = 0; sr < sub; ++sr)
            for (int sc = 0; sc < sub; ++sc) {
              const double x = mx + (cc + (sc + 0.5) / sub) * cell_w;
              const double y = my + (cr + (sr + 0.5) / sub) * cell_h;
              out.push_back({lay.at(x, y), module, cell, sr * sub + sc});
            }
        }
    }
  return out;
}

std::array<Vec3, 4> generator_footprint(const PVGeneratorSpec& spec, const Vec3& plane_normal) {
  const LocalLayout lay = layout(spec, plane_normal);
  const double w = spec.width_m(), h = spec.height_m();
  return {lay.at(0, 0), lay.at(w, 0), lay.at(w, h), lay.at(0, h)};
}

std::vector<Triangle> panel_quads(const PVGeneratorSpec& spec, const Vec3& plane_normal) {
  const LocalLayout lay = layout(spec, plane_normal);
  std::vector<Triangle> out;
  out.reserve(static_cast<std::size_t>(spec.module_count()) * 2);
  for (int mr = 0; mr < spec.module_rows; ++mr)
    for (int mc = 0; mc < spec.module_cols; ++mc) {
      const double x = mc * (spec.module_w_m + spec.gap_col_m);
      const double y = mr * (spec.module_h_m + spec.gap_row_m);
      const Vec3 a = lay.at(x, y), b = lay.at(x + spec.module_w_m, y);
      const Vec3 c = lay.at(x + spec.module_w_m, y + spec.module_h_m), d = lay.at(x, y + spec.module_h_m);
      out.push_back({{a, b, c}});
      out.push_back({{a, c, d}});
    }
  return out;
}

}  // namespace helios
