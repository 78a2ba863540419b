#pragma once

#include "helios/mesh.hpp"

// Simple parametric solids: "planes or blocks" defined directly in a scene,
// and the building blocks of the synthetic test scenes.
namespace helios::primitives {

/// Axis-aligned box with its minimum corner at `min` and extents `size`.
Mesh box(Vec3 min, Vec3 size);

/// Horizontal rectangle at height z spanning [x0,x1]×[y0,y1], normal +z.
Mesh plane(double x0, double y0, double x1, double y1, double z = 0.0);

/// Vertical closed cylinder with its base centered at `base`.
Mesh cylinder(Vec3 base, double radius, double height, int segments);

/// UV sphere (or ellipsoid with radii r) centered at `center`.
Mesh ellipsoid(Vec3 center, Vec3 radii, int stacks, int slices);

/// Torus in the plane spanned by `axis_u` and `axis_v` (unit, orthogonal).
Mesh torus(Vec3 center, Vec3 axis_u, Vec3 axis_v, double major_radius, double minor_radius, int major_segments,
           int minor_segments);

/// Thin square-section bar from a to b.
Mesh bar(Vec3 a, Vec3 b, double thickness);

/// Appends `src` to `dst`, re-indexing faces.
void merge(Mesh& dst, const Mesh& src);

}  // namespace helios::primitives
