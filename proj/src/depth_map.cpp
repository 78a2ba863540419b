#include "helios/depth_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "helios/error.hpp"

namespace helios {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct P2 {
  double x, y;
};

bool lex_less(const P2& a, const P2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

// Screen-space triangle ready for coverage tests. Vertices are wound
// counter-clockwise (y up). Each edge function is evaluated from the
// lexicographically smaller endpoint so that a shared edge gives exactly
// opposite values in its two triangles.
struct Setup {
  P2 p[3];
  double d0, dzdx, dzdy, dmin, dmax;
  double xmin, xmax, ymin, ymax;
  bool top_left[3];

  double edge(int k, double x, double y) const {
    const P2& a = p[k];
    const P2& b = p[(k + 1) % 3];
    if (lex_less(b, a)) return -((a.x - b.x) * (y - b.y) - (a.y - b.y) * (x - b.x));
    return (b.x - a.x) * (y - a.y) - (b.y - a.y) * (x - a.x);
  }

  bool covers(double x, double y) const {
    for (int k = 0; k < 3; ++k) {
      const double e = edge(k, x, y);
      if (e < 0.0 || (e == 0.0 && !top_left[k])) return false;
    }
    return true;
  }

  double depth(double x, double y) const {
    return std::clamp(d0 + dzdx * (x - p[0].x) + dzdy * (y - p[0].y), dmin, dmax);
  }
};

bool make_setup(const Triangle& t, const LightWindow& win, Setup& s) {
  LightWindow::Projected q[3];
  for (int k = 0; k < 3; ++k) q[k] = win.project(t.v[k]);
  const double area2 = (q[1].x - q[0].x) * (q[2].y - q[0].y) - (q[2].x - q[0].x) * (q[1].y - q[0].y);
  if (!(std::abs(area2) > 0.0) || !std::isfinite(area2)) return false;  // edge-on: covers no center
  if (area2 < 0.0) std::swap(q[1], q[2]);
  for (int k = 0; k < 3; ++k) s.p[k] = {q[k].x, q[k].y};

  const double a = std::abs(area2);
  const double e1x = q[1].x - q[0].x, e1y = q[1].y - q[0].y, e1z = q[1].depth - q[0].depth;
  const double e2x = q[2].x - q[0].x, e2y = q[2].y - q[0].y, e2z = q[2].depth - q[0].depth;
  s.d0 = q[0].depth;
  s.dzdx = (e1z * e2y - e2z * e1y) / a;
  s.dzdy = (e2z * e1x - e1z * e2x) / a;
  s.dmin = std::min({q[0].depth, q[1].depth, q[2].depth});
  s.dmax = std::max({q[0].depth, q[1].depth, q[2].depth});
  s.xmin = std::min({q[0].x, q[1].x, q[2].x});
  s.xmax = std::max({q[0].x, q[1].x, q[2].x});
  s.ymin = std::min({q[0].y, q[1].y, q[2].y});
  s.ymax = std::max({q[0].y, q[1].y, q[2].y});
  for (int k = 0; k < 3; ++k) {
    const double dx = s.p[(k + 1) % 3].x - s.p[k].x;
    const double dy = s.p[(k + 1) % 3].y - s.p[k].y;
    s.top_left[k] = dy < 0.0 || (dy == 0.0 && dx < 0.0);
  }
  return true;
}

Vec3 any_perpendicular(const Vec3& w) {
  // Prefer a horizontal u so the image stays upright for ordinary sun angles.
  Vec3 u = cross(Vec3{0, 0, 1}, w);
  if (length(u) < 1e-9) u = cross(Vec3{0, 1, 0}, w);
  return normalized(u);
}

}  // namespace

LightWindow::Projected LightWindow::project(const Vec3& p) const {
  const Vec3 d = p - origin;
  return {(dot(d, u) - u0) / texel, (dot(d, v) - v0) / texel, dot(d, w)};
}

long LightWindow::texel_index(const Projected& q) const {
  const double fx = std::floor(q.x), fy = std::floor(q.y);
  if (!(fx >= 0.0 && fy >= 0.0 && fx < width && fy < height)) return -1;
  return static_cast<long>(fy) * width + static_cast<long>(fx);
}

LightWindow make_light_window(std::span<const Vec3> footprint, const Vec3& sun_dir, int width, int height) {
  if (width < 5 || height < 5) throw InputError("depth map resolution must be at least 5x5", "depth_resolution");
  if (!(sun_dir.z > 0.0)) throw DomainError("sun below horizon");
  if (footprint.empty()) throw InputError("empty footprint");
  LightWindow win;
  win.width = width;
  win.height = height;
  win.w = -normalized(sun_dir);
  win.u = any_perpendicular(win.w);
  win.v = cross(win.w, win.u);

  Vec3 c{};
  for (const auto& p : footprint) c = c + p;
  win.origin = c * (1.0 / static_cast<double>(footprint.size()));

  double umin = kInf, umax = -kInf, vmin = kInf, vmax = -kInf;
  for (const auto& p : footprint) {
    const Vec3 d = p - win.origin;
    umin = std::min(umin, dot(d, win.u));
    umax = std::max(umax, dot(d, win.u));
    vmin = std::min(vmin, dot(d, win.v));
    vmax = std::max(vmax, dot(d, win.v));
  }
  const double texel = std::max((umax - umin) / (width - 4), (vmax - vmin) / (height - 4));
  if (!(texel > 0.0) || !std::isfinite(texel)) throw InputError("footprint projects to a point");
  win.texel = texel;
  win.u0 = 0.5 * (umin + umax) - 0.5 * width * texel;
  win.v0 = 0.5 * (vmin + vmax) - 0.5 * height * texel;
  return win;
}

DepthMap::DepthMap(const LightWindow& window)
    : window_(window), depth_(static_cast<std::size_t>(window.width) * window.height, kInf) {}

DepthMap build_depth_map(std::span<const Triangle> occluders, const Vec3& sun_dir, std::span<const Vec3> footprint,
                         int width, int height) {
  DepthMap map(make_light_window(footprint, sun_dir, width, height));
  const LightWindow& win = map.window();
  auto depth = map.data();
  Setup s;
  for (const Triangle& t : occluders) {
    if (!make_setup(t, win, s)) continue;
    const int j0 = std::max(0, static_cast<int>(std::ceil(s.ymin - 0.5)));
    const int j1 = std::min(win.height - 1, static_cast<int>(std::floor(s.ymax - 0.5)));
    for (int j = j0; j <= j1; ++j) {
      const double yc = j + 0.5;
      // Span of the row from the edges crossing it, widened by one texel;
      // the exact edge tests below decide coverage.
      double lo = kInf, hi = -kInf;
      for (int k = 0; k < 3; ++k) {
        const P2& a = s.p[k];
        const P2& b = s.p[(k + 1) % 3];
        if ((yc < std::min(a.y, b.y)) || (yc > std::max(a.y, b.y))) continue;
        if (a.y == b.y) {
          lo = std::min({lo, a.x, b.x});
          hi = std::max({hi, a.x, b.x});
        } else {
          const double x = a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y);
          lo = std::min(lo, x);
          hi = std::max(hi, x);
        }
      }
      if (lo > hi) continue;
      lo = std::max(lo, s.xmin);
      hi = std::min(hi, s.xmax);
      const int i0 = std::max(0, static_cast<int>(std::floor(lo - 0.5)) - 1);
      const int i1 = std::min(win.width - 1, static_cast<int>(std::ceil(hi - 0.5)) + 1);
      double* row = depth.data() + static_cast<std::size_t>(j) * win.width;
      for (int i = i0; i <= i1; ++i) {
        const double xc = i + 0.5;
        if (xc < s.xmin || xc > s.xmax || !s.covers(xc, yc)) continue;
        const double d = s.depth(xc, yc);
        if (d < row[i]) row[i] = d;
      }
    }
  }
  return map;
}

std::vector<double> depth_at_texels(std::span<const Triangle> occluders, const LightWindow& win,
                                    std::span<const long> texels, double max_depth) {
  std::vector<double> out(texels.size(), kInf);

  // Bucket the requested texels into coarse tiles.
  constexpr int kTile = 32;
  const int tw = (win.width + kTile - 1) / kTile;
  const int th = (win.height + kTile - 1) / kTile;
  std::vector<std::vector<std::size_t>> tiles(static_cast<std::size_t>(tw) * th);
  for (std::size_t k = 0; k < texels.size(); ++k) {
    if (texels[k] < 0) continue;
    const int i = static_cast<int>(texels[k] % win.width);
    const int j = static_cast<int>(texels[k] / win.width);
    tiles[static_cast<std::size_t>(j / kTile) * tw + i / kTile].push_back(k);
  }

  Setup s;
  for (const Triangle& t : occluders) {
    if (!make_setup(t, win, s)) continue;
    if (s.dmin > max_depth) continue;
    if (s.xmax < 0.5 || s.ymax < 0.5 || s.xmin > win.width - 0.5 || s.ymin > win.height - 0.5) continue;
    const int ti0 = std::max(0, static_cast<int>(std::floor(s.xmin)) / kTile);
    const int ti1 = std::min(tw - 1, static_cast<int>(std::floor(std::min(s.xmax, double(win.width - 1)))) / kTile);
    const int tj0 = std::max(0, static_cast<int>(std::floor(s.ymin)) / kTile);
    const int tj1 = std::min(th - 1, static_cast<int>(std::floor(std::min(s.ymax, double(win.height - 1)))) / kTile);
    for (int tj = tj0; tj <= tj1; ++tj) {
      for (int ti = ti0; ti <= ti1; ++ti) {
        for (std::size_t k : tiles[static_cast<std::size_t>(tj) * tw + ti]) {
          const double xc = static_cast<double>(texels[k] % win.width) + 0.5;
          const double yc = static_cast<double>(texels[k] / win.width) + 0.5;
          if (xc < s.xmin || xc > s.xmax || yc < s.ymin || yc > s.ymax) continue;
          if (!s.covers(xc, yc)) continue;
          const double d = s.depth(xc, yc);
          if (d < out[k]) out[k] = d;
        }
      }
    }
  }
  return out;
}

}  // namespace helios
