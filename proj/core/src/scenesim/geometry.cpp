#include "pickplace/scenesim/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "pickplace/errors.hpp"

namespace scenesim {

using pickplace::ContractError;

double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 normalized(const Vec3& a) {
  double n = norm(a);
  if (n == 0.0) throw ContractError("normalized: zero vector");
  return a * (1.0 / n);
}

double cross2(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
double norm2(const Vec2& a) { return std::sqrt(a.x * a.x + a.y * a.y); }

Mat3 Mat3::rot_z(double yaw) {
  double c = std::cos(yaw), s = std::sin(yaw);
  Mat3 r;
  r.m = {c, -s, 0, s, c, 0, 0, 0, 1};
  return r;
}

Mat3 Mat3::from_rpy(double roll, double pitch, double yaw) {
  double cr = std::cos(roll), sr = std::sin(roll);
  double cp = std::cos(pitch), sp = std::sin(pitch);
  Mat3 rx, ry;
  rx.m = {1, 0, 0, 0, cr, -sr, 0, sr, cr};
  ry.m = {cp, 0, sp, 0, 1, 0, -sp, 0, cp};
  return rot_z(yaw) * ry * rx;
}

Vec3 Mat3::apply(const Vec3& v) const {
  return {m[0] * v.x + m[1] * v.y + m[2] * v.z, m[3] * v.x + m[4] * v.y + m[5] * v.z,
          m[6] * v.x + m[7] * v.y + m[8] * v.z};
}

Mat3 Mat3::operator*(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double acc = 0;
      for (int k = 0; k < 3; ++k) acc += m[i * 3 + k] * o.m[k * 3 + j];
      r.m[i * 3 + j] = acc;
    }
  return r;
}

Mat3 Mat3::transposed() const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i * 3 + j] = m[j * 3 + i];
  return r;
}

double Mat3::yaw() const { return std::atan2(m[3], m[0]); }

std::array<double, 3> Mat3::rpy() const {
  // Inverse of from_rpy: R = Rz Ry Rx.
  double pitch = std::asin(std::clamp(-m[6], -1.0, 1.0));
  double roll, yaw;
  if (std::abs(m[6]) < 1.0 - 1e-12) {
    roll = std::atan2(m[7], m[8]);
    yaw = std::atan2(m[3], m[0]);
  } else {  // gimbal lock: fold everything into yaw
    roll = 0.0;
    yaw = std::atan2(-m[1], m[4]);
  }
  return {roll, pitch, yaw};
}

double geodesic_angle(const Mat3& a, const Mat3& b) {
  Mat3 r = a.transposed() * b;
  double tr = r.m[0] + r.m[4] + r.m[8];
  return std::acos(std::clamp((tr - 1.0) / 2.0, -1.0, 1.0));
}

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * M_PI);
  if (a > M_PI) a -= 2.0 * M_PI;
  if (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

Vec2 Pose3::apply_xy(const Vec2& v) const {
  Vec3 p = apply({v.x, v.y, 0.0});
  return {p.x, p.y};
}

Pose3 Pose3::inverse() const {
  Mat3 rt = R.transposed();
  Vec3 ti = rt.apply(t) * -1.0;
  return {ti, rt};
}

Pose3 Pose3::operator*(const Pose3& o) const { return {R.apply(o.t) + t, R * o.R}; }

double polygon_area(const Polygon& p) {
  double a = 0;
  for (size_t i = 0; i < p.size(); ++i) a += cross2(p[i], p[(i + 1) % p.size()]);
  return 0.5 * a;
}

Vec2 polygon_centroid(const Polygon& p) {
  double a = 0, cx = 0, cy = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    const Vec2& u = p[i];
    const Vec2& v = p[(i + 1) % p.size()];
    double w = cross2(u, v);
    a += w;
    cx += (u.x + v.x) * w;
    cy += (u.y + v.y) * w;
  }
  if (std::abs(a) < 1e-300) throw ContractError("polygon_centroid: degenerate polygon");
  return {cx / (3.0 * a), cy / (3.0 * a)};
}

double polygon_radius(const Polygon& p) {
  double r = 0;
  for (const auto& v : p) r = std::max(r, norm2(v));
  return r;
}

bool point_in_polygon(const Vec2& q, const Polygon& p) {
  // Even-odd ray cast along +x.
  bool inside = false;
  for (size_t i = 0, j = p.size() - 1; i < p.size(); j = i++) {
    bool cross_y = (p[i].y > q.y) != (p[j].y > q.y);
    if (cross_y) {
      double xi = p[j].x + (p[i].x - p[j].x) * (q.y - p[j].y) / (p[i].y - p[j].y);
      if (q.x < xi) inside = !inside;
    }
  }
  return inside;
}

namespace {

bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    return cross2(q - p, r - p);
  };
  double o1 = orient(a, b, c), o2 = orient(a, b, d);
  double o3 = orient(c, d, a), o4 = orient(c, d, b);
  return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}

}  // namespace

bool polygons_intersect(const Polygon& a, const Polygon& b) {
  Aabb ba = polygon_aabb(a), bb = polygon_aabb(b);
  if (ba.xmax < bb.xmin || bb.xmax < ba.xmin || ba.ymax < bb.ymin || bb.ymax < ba.ymin)
    return false;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      if (segments_cross(a[i], a[(i + 1) % a.size()], b[j], b[(j + 1) % b.size()])) return true;
  return point_in_polygon(a[0], b) || point_in_polygon(b[0], a);
}

Polygon transform_polygon(const Polygon& p, const Pose3& pose) {
  Polygon out;
  out.reserve(p.size());
  for (const auto& v : p) out.push_back(pose.apply_xy(v));
  return out;
}

Polygon scale_polygon(const Polygon& p, double s) {
  Polygon out;
  out.reserve(p.size());
  for (const auto& v : p) out.push_back(v * s);
  return out;
}

Aabb polygon_aabb(const Polygon& p) {
  Aabb b{p[0].x, p[0].x, p[0].y, p[0].y};
  for (const auto& v : p) {
    b.xmin = std::min(b.xmin, v.x);
    b.xmax = std::max(b.xmax, v.x);
    b.ymin = std::min(b.ymin, v.y);
    b.ymax = std::max(b.ymax, v.y);
  }
  return b;
}

std::vector<std::array<int, 3>> triangulate(const Polygon& poly) {
  // Ear clipping; assumes a CCW simple polygon.
  if (poly.size() < 3) throw ContractError("triangulate: need at least 3 vertices");
  std::vector<int> idx(poly.size());
  for (size_t i = 0; i < poly.size(); ++i) idx[i] = static_cast<int>(i);
  std::vector<std::array<int, 3>> tris;
  auto is_ear = [&](int ai, int bi, int ci) {
    const Vec2 &a = poly[ai], &b = poly[bi], &c = poly[ci];
    if (cross2(b - a, c - a) <= 1e-15) return false;  // reflex or degenerate
    for (int j : idx) {
      if (j == ai || j == bi || j == ci) continue;
      const Vec2& q = poly[j];
      // inside-triangle test, strict
      double d1 = cross2(b - a, q - a);
      double d2 = cross2(c - b, q - b);
      double d3 = cross2(a - c, q - c);
      if (d1 > 0 && d2 > 0 && d3 > 0) return false;
    }
    return true;
  };
  while (idx.size() > 3) {
    bool clipped = false;
    for (size_t i = 0; i < idx.size(); ++i) {
      int ai = idx[(i + idx.size() - 1) % idx.size()];
      int bi = idx[i];
      int ci = idx[(i + 1) % idx.size()];
      if (is_ear(ai, bi, ci)) {
        tris.push_back({ai, bi, ci});
        idx.erase(idx.begin() + static_cast<long>(i));
        clipped = true;
        break;
      }
    }
    if (!clipped) throw ContractError("triangulate: polygon is not simple/CCW");
  }
  tris.push_back({idx[0], idx[1], idx[2]});
  return tris;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Vec2> h(2 * pts.size());
  size_t k = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross2(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) k--;
    h[k++] = pts[i];
  }
  for (size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross2(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) k--;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

bool point_in_convex_hull(const Vec2& q, const std::vector<Vec2>& hull) {
  if (hull.empty()) return false;
  if (hull.size() == 1) return q.x == hull[0].x && q.y == hull[0].y;
  if (hull.size() == 2) {
    Vec2 d = hull[1] - hull[0];
    if (cross2(d, q - hull[0]) != 0) return false;
    double t = (q.x - hull[0].x) * d.x + (q.y - hull[0].y) * d.y;
    return t >= 0 && t <= d.x * d.x + d.y * d.y;
  }
  for (size_t i = 0; i < hull.size(); ++i) {
    if (cross2(hull[(i + 1) % hull.size()] - hull[i], q - hull[i]) < 0) return false;
  }
  return true;
}

}  // namespace scenesim
