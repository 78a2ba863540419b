#include "helios/primitives.hpp"

#include <cmath>

namespace helios::primitives {
namespace {

using Idx = std::uint32_t;

void quad(Mesh& m, Idx a, Idx b, Idx c, Idx d) {
  m.triangles.push_back({a, b, c});
  m.triangles.push_back({a, c, d});
}

}  // namespace

Mesh box(Vec3 min, Vec3 size) {
  Mesh m;
  for (int i = 0; i < 8; ++i) {
    m.vertices.push_back({min.x + ((i & 1) ? size.x : 0.0), min.y + ((i & 2) ? size.y : 0.0),
                          min.z + ((i & 4) ? size.z : 0.0)});
  }
  // Outward-facing, counter-clockwise seen from outside.
  quad(m, 0, 2, 3, 1);  // bottom
  quad(m, 4, 5, 7, 6);  // top
  quad(m, 0, 1, 5, 4);  // south
  quad(m, 2, 6, 7, 3);  // north
  quad(m, 0, 4, 6, 2);  // west
  quad(m, 1, 3, 7, 5);  // east
  return m;
}

Mesh plane(double x0, double y0, double x1, double y1, double z) {
  Mesh m;
  m.vertices = {{x0, y0, z}, {x1, y0, z}, {x1, y1, z}, {x0, y1, z}};
  quad(m, 0, 1, 2, 3);
  return m;
}

Mesh cylinder(Vec3 base, double radius, double height, int segments) {
  Mesh m;
  const auto n = static_cast<Idx>(segments);
  for (Idx i = 0; i < n; ++i) {
    const double a = 2.0 * kPi * i / n;
    const Vec3 off{radius * std::cos(a), radius * std::sin(a), 0.0};
    m.vertices.push_back(base + off);
    m.vertices.push_back(base + off + Vec3{0, 0, height});
  }
  const Idx bottom = static_cast<Idx>(m.vertices.size());
  m.vertices.push_back(base);
  m.vertices.push_back(base + Vec3{0, 0, height});
  for (Idx i = 0; i < n; ++i) {
    const Idx j = (i + 1) % n;
    quad(m, 2 * i, 2 * j, 2 * j + 1, 2 * i + 1);
    m.triangles.push_back({bottom, 2 * j, 2 * i});
    m.triangles.push_back({bottom + 1, 2 * i + 1, 2 * j + 1});
  }
  return m;
}

Mesh ellipsoid(Vec3 center, Vec3 radii, int stacks, int slices) {
  Mesh m;
  const auto ns = static_cast<Idx>(stacks);
  const auto nl = static_cast<Idx>(slices);
  m.vertices.push_back(center + Vec3{0, 0, -radii.z});
  for (Idx i = 1; i < ns; ++i) {
    const double phi = kPi * i / ns - kPi / 2;
    for (Idx j = 0; j < nl; ++j) {
      const double th = 2.0 * kPi * j / nl;
      m.vertices.push_back(center + Vec3{radii.x * std::cos(phi) * std::cos(th), radii.y * std::cos(phi) * std::sin(th),
                                         radii.z * std::sin(phi)});
    }
  }
  const Idx top = static_cast<Idx>(m.vertices.size());
  m.vertices.push_back(center + Vec3{0, 0, radii.z});
  auto ring = [nl](Idx i, Idx j) { return 1 + (i - 1) * nl + (j % nl); };
  for (Idx j = 0; j < nl; ++j) {
    m.triangles.push_back({0, ring(1, j + 1), ring(1, j)});
    m.triangles.push_back({top, ring(ns - 1, j), ring(ns - 1, j + 1)});
  }
  for (Idx i = 1; i + 1 < ns; ++i)
    for (Idx j = 0; j < nl; ++j) quad(m, ring(i, j), ring(i, j + 1), ring(i + 1, j + 1), ring(i + 1, j));
  return m;
}

Mesh torus(Vec3 center, Vec3 axis_u, Vec3 axis_v, double major_radius, double minor_radius, int major_segments,
           int minor_segments) {
  Mesh m;
  const Vec3 axis_w = cross(axis_u, axis_v);
  const auto nM = static_cast<Idx>(major_segments);
  const auto nm = static_cast<Idx>(minor_segments);
  for (Idx i = 0; i < nM; ++i) {
    const double a = 2.0 * kPi * i / nM;
    const Vec3 radial = axis_u * std::cos(a) + axis_v * std::sin(a);
    for (Idx j = 0; j < nm; ++j) {
      const double b = 2.0 * kPi * j / nm;
      m.vertices.push_back(center + radial * (major_radius + minor_radius * std::cos(b)) +
                           axis_w * (minor_radius * std::sin(b)));
    }
  }
  for (Idx i = 0; i < nM; ++i)
    for (Idx j = 0; j < nm; ++j) {
      const Idx i1 = (i + 1) % nM, j1 = (j + 1) % nm;
      quad(m, i * nm + j, i1 * nm + j, i1 * nm + j1, i * nm + j1);
    }
  return m;
}

Mesh bar(Vec3 a, Vec3 b, double thickness) {
  const Vec3 d = normalized(b - a);
  const Vec3 helper = std::abs(d.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
  const Vec3 p = normalized(cross(d, helper)) * (thickness / 2);
  const Vec3 q = normalized(cross(d, p)) * (thickness / 2);
  Mesh m;
  for (const Vec3& end : {a, b}) {
    m.vertices.push_back(end + p + q);
    m.vertices.push_back(end - p + q);
    m.vertices.push_back(end - p - q);
    m.vertices.push_back(end + p - q);
  }
  for (Idx i = 0; i < 4; ++i) {
    const Idx j = (i + 1) % 4;
    quad(m, i, j, 4 + j, 4 + i);
  }
  quad(m, 0, 3, 2, 1);
  quad(m, 4, 5, 6, 7);
  return m;
}

void merge(Mesh& dst, const Mesh& src) {
  const auto base = static_cast<Idx>(dst.vertices.size());
  dst.vertices.insert(dst.vertices.end(), src.vertices.begin(), src.vertices.end());
  for (const auto& t : src.triangles) dst.triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
}

}  // namespace helios::primitives
