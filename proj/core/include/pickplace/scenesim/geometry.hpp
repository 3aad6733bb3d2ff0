#pragma once

#include <array>
#include <vector>

namespace scenesim {

struct Vec2 {
  double x = 0, y = 0;
  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
};

struct Vec3 {
  double x = 0, y = 0, z = 0;
  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
};

double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);
Vec3 normalized(const Vec3& a);
double cross2(const Vec2& a, const Vec2& b);  // z of the 2-D cross product
double norm2(const Vec2& a);

// Row-major 3x3 rotation matrix.
struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static Mat3 identity() { return {}; }
  static Mat3 rot_z(double yaw);
  // R = Rz(yaw) * Ry(pitch) * Rx(roll), the usual XYZ-extrinsic convention.
  static Mat3 from_rpy(double roll, double pitch, double yaw);

  Vec3 apply(const Vec3& v) const;
  Mat3 operator*(const Mat3& o) const;
  Mat3 transposed() const;
  double yaw() const;  // atan2(m10, m00)
  std::array<double, 3> rpy() const;
};

// Geodesic angle between two rotations: acos((trace(Ra^T Rb) - 1) / 2).
double geodesic_angle(const Mat3& a, const Mat3& b);
// Wrap to (-pi, pi].
double wrap_angle(double a);

// Rigid transform, local -> world.
struct Pose3 {
  Vec3 t;
  Mat3 R;

  static Pose3 identity() { return {}; }
  static Pose3 translation(double x, double y, double z) { return {{x, y, z}, Mat3::identity()}; }
  static Pose3 planar(double x, double y, double yaw, double z = 0.0) {
    return {{x, y, z}, Mat3::rot_z(yaw)};
  }
  static Pose3 from_rpy(const Vec3& t, double roll, double pitch, double yaw) {
    return {t, Mat3::from_rpy(roll, pitch, yaw)};
  }

  Vec3 apply(const Vec3& v) const { return R.apply(v) + t; }
  Vec2 apply_xy(const Vec2& v) const;
  Pose3 inverse() const;
  Pose3 operator*(const Pose3& o) const;  // this after o: (this*o)(x) = this(o(x))
  double yaw() const { return R.yaw(); }
};

// Simple polygon, CCW, in a body's local frame (meters).
using Polygon = std::vector<Vec2>;

double polygon_area(const Polygon& p);
Vec2 polygon_centroid(const Polygon& p);
// Circumradius about the local origin.
double polygon_radius(const Polygon& p);
bool point_in_polygon(const Vec2& q, const Polygon& p);
// True if the (simple, possibly non-convex) polygons overlap.
bool polygons_intersect(const Polygon& a, const Polygon& b);
Polygon transform_polygon(const Polygon& p, const Pose3& pose);
Polygon scale_polygon(const Polygon& p, double s);

struct Aabb {
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
};
Aabb polygon_aabb(const Polygon& p);

// Ear-clipping triangulation; returns index triples into the polygon.
std::vector<std::array<int, 3>> triangulate(const Polygon& p);

// Andrew monotone chain; returns hull vertices CCW. Fewer than 3 distinct
// points yield the degenerate chain (deduplicated, sorted).
std::vector<Vec2> convex_hull(std::vector<Vec2> pts);
// Containment with boundary counted inside (exact arithmetic). Degenerate
// hulls (1 or 2 vertices) contain exactly their point/segment.
bool point_in_convex_hull(const Vec2& q, const std::vector<Vec2>& hull);

}  // namespace scenesim
