#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "helios/electrical.hpp"
#include "helios/mesh.hpp"

namespace helios {

enum class MountMode { Fixed, TwoAxis };

/// Geometric layout and electrical wiring of one PV generator.
///
/// Modules sit on a rows × cols grid in the generator plane, centered on
/// `origin`. Module index = row * module_cols + col with row 0 at the bottom
/// edge and col 0 at the left edge seen from the front. Cells follow the same
/// convention inside a module. Consecutive modules (in index order) form a
/// series string of `modules_per_string`; `strings_parallel` strings are
/// connected in parallel.
struct PVGeneratorSpec {
  std::string id;
  Vec3 origin{};
  MountMode mode = MountMode::Fixed;
  double azimuth_deg = 180.0;  // clockwise from North, direction the front faces
  double tilt_deg = 0.0;       // from horizontal
  int module_rows = 1;
  int module_cols = 1;
  double module_w_m = 1.0;
  double module_h_m = 1.6;
  double gap_row_m = 0.0;
  double gap_col_m = 0.0;
  int cell_rows = 6;
  int cell_cols = 10;
  /// Cell indices (within a module) protected by each bypass diode.
  std::vector<std::vector<int>> substrings;
  int modules_per_string = 1;
  int strings_parallel = 1;
  int subdivision = 3;
  bool self_occluding = false;
  std::optional<CellParams> cell_params;

  int module_count() const { return module_rows * module_cols; }
  int cells_per_module() const { return cell_rows * cell_cols; }
  int samples_per_cell() const { return subdivision * subdivision; }
  std::size_t cell_count() const { return static_cast<std::size_t>(module_count()) * cells_per_module(); }
  std::size_t sample_count() const { return cell_count() * samples_per_cell(); }
  double width_m() const { return module_cols * module_w_m + (module_cols - 1) * gap_col_m; }
  double height_m() const { return module_rows * module_h_m + (module_rows - 1) * gap_row_m; }
};

/// Throws InputError (field path rooted at `path`) on any invariant violation:
/// substring coverage, positive counts and sizes, string wiring consistency.
void validate(const PVGeneratorSpec& spec, const std::string& path = "generator");

/// Splits `cells` cells into `groups` contiguous substrings of equal size.
std::vector<std::vector<int>> contiguous_substrings(int cells, int groups);

/// Unit normal of a fixed plane.
Vec3 fixed_normal(double azimuth_deg, double tilt_deg);

/// Fixed mode: the plane normal. Two-axis mode: the sun direction (ideal
/// pointing); DomainError when the sun is at or below the horizon.
Vec3 tracker_normal(const PVGeneratorSpec& spec, const SunPosition& pos);

ArrayWiring wiring_of(const PVGeneratorSpec& spec);

/// Orthonormal in-plane frame: `right` is horizontal, `up` climbs the slope.
struct PlaneBasis {
  Vec3 normal;
  Vec3 right;
  Vec3 up;
};

/// `fallback_azimuth_deg` orients `right` when the plane is horizontal.
PlaneBasis plane_basis(const Vec3& normal, double fallback_azimuth_deg);

struct SamplePoint {
  Vec3 position;
  std::int32_t module = 0;
  std::int32_t cell = 0;  // within the module
  std::int32_t sub = 0;   // within the cell, row-major over subdivision²
};

/// Sub-cell centers, ordered by module, then cell, then sub-cell.
std::vector<SamplePoint> generator_samples(const PVGeneratorSpec& spec, const Vec3& plane_normal);

/// Corners of the whole module array (bottom-left, bottom-right, top-right, top-left).
std::array<Vec3, 4> generator_footprint(const PVGeneratorSpec& spec, const Vec3& plane_normal);

/// Two triangles per module, used when the generator acts as an occluder.
std::vector<Triangle> panel_quads(const PVGeneratorSpec& spec, const Vec3& plane_normal);

}  // namespace helios
