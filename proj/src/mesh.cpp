#include "helios/mesh.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "helios/error.hpp"

namespace helios {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_double(std::string_view tok, double& out) {
  // std::from_chars does not accept a leading '+'.
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return res.ec == std::errc{} && res.ptr == tok.data() + tok.size() && std::isfinite(out);
}

[[noreturn]] void fail(const std::string& what, std::size_t line) {
  throw InputError(what + ", line " + std::to_string(line));
}

}  // namespace

Mesh parse_obj(std::string_view text) {
  Mesh mesh;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    const auto raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    auto line = trim(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const auto tokens = split_ws(line);

    if (tokens[0] == "v") {
      // Optional homogeneous w is accepted and ignored.
      if (tokens.size() != 4 && tokens.size() != 5) fail("malformed vertex", line_no);
      Vec3 p;
      if (!parse_double(tokens[1], p.x) || !parse_double(tokens[2], p.y) || !parse_double(tokens[3], p.z))
        fail("malformed vertex", line_no);
      mesh.vertices.push_back(p);
    } else if (tokens[0] == "f") {
      if (tokens.size() < 4) fail("face needs at least 3 vertices", line_no);
      std::vector<std::uint32_t> idx;
      idx.reserve(tokens.size() - 1);
      for (std::size_t k = 1; k < tokens.size(); ++k) {
        const auto tok = tokens[k].substr(0, tokens[k].find('/'));
        long long value = 0;
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size() || value == 0)
          fail("malformed face index", line_no);
        const auto count = static_cast<long long>(mesh.vertices.size());
        const long long resolved = value > 0 ? value - 1 : count + value;
        if (resolved < 0 || resolved >= count) fail("index out of range", line_no);
        idx.push_back(static_cast<std::uint32_t>(resolved));
      }
      for (std::size_t k = 1; k + 1 < idx.size(); ++k) mesh.triangles.push_back({idx[0], idx[k], idx[k + 1]});
    }
    // vt, vn, usemtl, o, g, s, ... are ignored.
  }
  if (mesh.triangles.empty()) throw InputError("empty mesh, line " + std::to_string(line_no));
  return mesh;
}

std::string to_obj(const Mesh& mesh) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& v : mesh.vertices) os << "v " << v.x << ' ' << v.y << ' ' << v.z << '\n';
  for (const auto& t : mesh.triangles) os << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  return os.str();
}

Transform::Transform(Vec3 translation, std::array<double, 3> rotation_zyx_deg, Vec3 scale)
    : translation_(translation), rotation_deg_(rotation_zyx_deg), scale_(scale) {
  const double s[3] = {scale.x, scale.y, scale.z};
  for (int i = 0; i < 3; ++i) {
    if (!(s[i] > 0.0) || !std::isfinite(s[i]))
      throw InputError("scale components must be > 0", "scale[" + std::to_string(i) + "]");
  }
  if (!is_finite(translation)) throw InputError("translation must be finite", "translation_m");

  const double a = deg2rad(rotation_zyx_deg[0]);
  const double b = deg2rad(rotation_zyx_deg[1]);
  const double c = deg2rad(rotation_zyx_deg[2]);
  const double ca = std::cos(a), sa = std::sin(a);
  const double cb = std::cos(b), sb = std::sin(b);
  const double cc = std::cos(c), sc = std::sin(c);
  // R = Rz(a) * Ry(b) * Rx(c)
  rot_ = {{{ca * cb, ca * sb * sc - sa * cc, ca * sb * cc + sa * sc},
           {sa * cb, sa * sb * sc + ca * cc, sa * sb * cc - ca * sc},
           {-sb, cb * sc, cb * cc}}};
  identity_ = translation == Vec3{} && rotation_zyx_deg == std::array<double, 3>{0, 0, 0} && scale == Vec3{1, 1, 1};
}

Vec3 Transform::apply(const Vec3& p) const {
  if (identity_) return p;
  const Vec3 s{p.x * scale_.x, p.y * scale_.y, p.z * scale_.z};
  return {rot_[0][0] * s.x + rot_[0][1] * s.y + rot_[0][2] * s.z + translation_.x,
          rot_[1][0] * s.x + rot_[1][1] * s.y + rot_[1][2] * s.z + translation_.y,
          rot_[2][0] * s.x + rot_[2][1] * s.y + rot_[2][2] * s.z + translation_.z};
}

Vec3 Transform::apply_inverse(const Vec3& p) const {
  if (identity_) return p;
  const Vec3 d = p - translation_;
  // R is orthonormal: R^-1 = R^T
  const Vec3 r{rot_[0][0] * d.x + rot_[1][0] * d.y + rot_[2][0] * d.z,
               rot_[0][1] * d.x + rot_[1][1] * d.y + rot_[2][1] * d.z,
               rot_[0][2] * d.x + rot_[1][2] * d.y + rot_[2][2] * d.z};
  return {r.x / scale_.x, r.y / scale_.y, r.z / scale_.z};
}

Mesh transform_mesh(const Mesh& mesh, const Transform& t) {
  Mesh out;
  out.triangles = mesh.triangles;
  out.vertices.reserve(mesh.vertices.size());
  for (const auto& v : mesh.vertices) out.vertices.push_back(t.apply(v));
  return out;
}

std::size_t append_triangles(const Mesh& mesh, std::vector<Triangle>& out) {
  std::size_t dropped = 0;
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const Triangle tri = mesh.triangle(i);
    if (!(area(tri) > kDegenerateArea)) {
      ++dropped;
      continue;
    }
    out.push_back(tri);
  }
  return dropped;
}

}  // namespace helios
