#include "pickplace/scenesim/render.hpp"

#include <algorithm>
#include <cmath>

namespace scenesim {

namespace {

constexpr double kZNear = 0.02;
const Vec3 kLightDir = normalized({0.25, 0.15, 0.92});
constexpr std::array<float, 3> kTableColor{0.75f, 0.72f, 0.68f};

struct Tri {
  Vec3 a, b, c;
  std::array<float, 3> color;
};

void shade(Tri& t) {
  Vec3 n = cross(t.b - t.a, t.c - t.a);
  double len = norm(n);
  double lambert = len > 0 ? std::abs(dot(n * (1.0 / len), kLightDir)) : 1.0;
  float s = static_cast<float>(0.55 + 0.45 * lambert);
  for (auto& c : t.color) c *= s;
}

void emit_body(const Body& b, std::vector<Tri>& tris) {
  const Polygon& fp = b.footprint;
  auto tris_idx = triangulate(fp);
  const double h = b.height;
  auto world = [&](const Vec2& v, double z) { return b.pose.apply({v.x, v.y, z}); };
  for (const auto& t : tris_idx) {
    // top (CCW from above) and bottom
    tris.push_back({world(fp[t[0]], h), world(fp[t[1]], h), world(fp[t[2]], h), b.color});
    shade(tris.back());
    tris.push_back({world(fp[t[2]], 0), world(fp[t[1]], 0), world(fp[t[0]], 0), b.color});
    shade(tris.back());
  }
  for (size_t i = 0; i < fp.size(); ++i) {
    const Vec2& p = fp[i];
    const Vec2& q = fp[(i + 1) % fp.size()];
    Vec3 p0 = world(p, 0), p1 = world(q, 0), p2 = world(q, h), p3 = world(p, h);
    tris.push_back({p0, p1, p2, b.color});
    shade(tris.back());
    tris.push_back({p0, p2, p3, b.color});
    shade(tris.back());
  }
}

std::vector<Tri> scene_triangles(const SceneState& state) {
  std::vector<Tri> tris;
  // Table: a large quad at z=0 under everything.
  const double mx = 0.45, my = 0.75;
  Tri t1{{-mx, -my, 0}, {mx, -my, 0}, {mx, my, 0}, kTableColor};
  Tri t2{{-mx, -my, 0}, {mx, my, 0}, {-mx, my, 0}, kTableColor};
  shade(t1);
  shade(t2);
  tris.push_back(t1);
  tris.push_back(t2);
  for (const auto& b : state.bodies) emit_body(b, tris);
  return tris;
}

// Clip a polygon (camera frame) against z >= kZNear.
std::vector<Vec3> clip_near(const std::vector<Vec3>& poly) {
  std::vector<Vec3> out;
  for (size_t i = 0; i < poly.size(); ++i) {
    const Vec3& a = poly[i];
    const Vec3& b = poly[(i + 1) % poly.size()];
    bool ain = a.z >= kZNear, bin = b.z >= kZNear;
    if (ain) out.push_back(a);
    if (ain != bin) {
      double t = (kZNear - a.z) / (b.z - a.z);
      out.push_back(a + (b - a) * t);
    }
  }
  return out;
}

}  // namespace

ViewImage render_view(const SceneState& state, const CameraSpec& cam) {
  ViewImage img;
  img.width = cam.width;
  img.height = cam.height;
  img.rgb.assign(static_cast<size_t>(3) * cam.width * cam.height, 0.f);
  img.depth.assign(static_cast<size_t>(cam.width) * cam.height, 0.f);
  std::vector<float> izbuf(static_cast<size_t>(cam.width) * cam.height, 0.f);

  Mat3 r_wc = cam.cam_to_world.R.transposed();
  auto to_cam = [&](const Vec3& p) { return r_wc.apply(p - cam.cam_to_world.t); };

  struct ScreenV {
    double u, v, iz;
  };
  auto project = [&](const Vec3& pc) {
    return ScreenV{cam.fx * pc.x / pc.z + cam.cx, cam.fy * pc.y / pc.z + cam.cy, 1.0 / pc.z};
  };

  const int64_t wh = static_cast<int64_t>(cam.width) * cam.height;
  for (const Tri& tri : scene_triangles(state)) {
    std::vector<Vec3> cam_poly = clip_near({to_cam(tri.a), to_cam(tri.b), to_cam(tri.c)});
    if (cam_poly.size() < 3) continue;
    // Fan-triangulate the clipped polygon in screen space.
    std::vector<ScreenV> sv;
    sv.reserve(cam_poly.size());
    for (const auto& p : cam_poly) sv.push_back(project(p));
    for (size_t k = 1; k + 1 < sv.size(); ++k) {
      const ScreenV& A = sv[0];
      const ScreenV& B = sv[k];
      const ScreenV& C = sv[k + 1];
      double area = (B.u - A.u) * (C.v - A.v) - (B.v - A.v) * (C.u - A.u);
      if (std::abs(area) < 1e-12) continue;
      double inv_area = 1.0 / area;
      int jmin = std::max(0, static_cast<int>(std::floor(std::min({A.u, B.u, C.u}) - 0.5)));
      int jmax = std::min(cam.width - 1, static_cast<int>(std::ceil(std::max({A.u, B.u, C.u}))));
      int imin = std::max(0, static_cast<int>(std::floor(std::min({A.v, B.v, C.v}) - 0.5)));
      int imax = std::min(cam.height - 1, static_cast<int>(std::ceil(std::max({A.v, B.v, C.v}))));
      for (int i = imin; i <= imax; ++i) {
        double y = i + 0.5;
        for (int j = jmin; j <= jmax; ++j) {
          double x = j + 0.5;
          double w0 = ((B.u - x) * (C.v - y) - (B.v - y) * (C.u - x)) * inv_area;
          double w1 = ((C.u - x) * (A.v - y) - (C.v - y) * (A.u - x)) * inv_area;
          double w2 = 1.0 - w0 - w1;
          if (w0 < 0 || w1 < 0 || w2 < 0) continue;
          float iz = static_cast<float>(w0 * A.iz + w1 * B.iz + w2 * C.iz);
          int64_t px = static_cast<int64_t>(i) * cam.width + j;
          if (iz > izbuf[px]) {
            izbuf[px] = iz;
            img.depth[px] = 1.0f / iz;
            img.rgb[px] = tri.color[0];
            img.rgb[wh + px] = tri.color[1];
            img.rgb[2 * wh + px] = tri.color[2];
          }
        }
      }
    }
  }
  return img;
}

std::vector<ViewImage> render_views(const SceneState& state,
                                    const std::vector<CameraSpec>& cams) {
  std::vector<ViewImage> out;
  out.reserve(cams.size());
  for (const auto& c : cams) out.push_back(render_view(state, c));
  return out;
}

OrthoView render_ortho(const SceneState& state, const pickplace::GridSpec& grid) {
  OrthoView o;
  o.rows = grid.rows();
  o.cols = grid.cols();
  const int64_t n = static_cast<int64_t>(o.rows) * o.cols;
  o.height.assign(n, 0.f);
  o.rgb.assign(3 * n, 0.f);
  for (int64_t i = 0; i < n; ++i) {
    o.rgb[i] = kTableColor[0];
    o.rgb[n + i] = kTableColor[1];
    o.rgb[2 * n + i] = kTableColor[2];
  }
  const double ps = grid.pixel_size;

  for (const auto& b : state.bodies) {
    // World triangles of this body, then vertical ray casts on the pixel
    // grid covering its AABB.
    std::vector<Tri> tris;
    emit_body(b, tris);
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& t : tris)
      for (const Vec3* v : {&t.a, &t.b, &t.c}) {
        xmin = std::min(xmin, v->x);
        xmax = std::max(xmax, v->x);
        ymin = std::min(ymin, v->y);
        ymax = std::max(ymax, v->y);
      }
    int u0 = std::max(0, static_cast<int>(std::floor((xmin - grid.bounds.xmin) / ps)));
    int u1 = std::min(o.rows - 1, static_cast<int>(std::ceil((xmax - grid.bounds.xmin) / ps)));
    int v0 = std::max(0, static_cast<int>(std::floor((ymin - grid.bounds.ymin) / ps)));
    int v1 = std::min(o.cols - 1, static_cast<int>(std::ceil((ymax - grid.bounds.ymin) / ps)));
    for (int u = u0; u <= u1; ++u) {
      double x = grid.bounds.xmin + (u + 0.5) * ps;
      for (int v = v0; v <= v1; ++v) {
        double y = grid.bounds.ymin + (v + 0.5) * ps;
        double best = -1e300;
        for (const auto& t : tris) {
          double d1 = (t.b.x - t.a.x) * (y - t.a.y) - (t.b.y - t.a.y) * (x - t.a.x);
          double d2 = (t.c.x - t.b.x) * (y - t.b.y) - (t.c.y - t.b.y) * (x - t.b.x);
          double d3 = (t.a.x - t.c.x) * (y - t.c.y) - (t.a.y - t.c.y) * (x - t.c.x);
          bool neg = d1 < 0 || d2 < 0 || d3 < 0;
          bool pos = d1 > 0 || d2 > 0 || d3 > 0;
          if (neg && pos) continue;  // outside the XY projection
          // Plane z at (x,y).
          Vec3 nrm = cross(t.b - t.a, t.c - t.a);
          if (std::abs(nrm.z) < 1e-12) continue;  // vertical face
          double z = t.a.z - (nrm.x * (x - t.a.x) + nrm.y * (y - t.a.y)) / nrm.z;
          best = std::max(best, z);
        }
        if (best > 0) {
          int64_t px = static_cast<int64_t>(u) * o.cols + v;
          const int64_t nn = static_cast<int64_t>(o.rows) * o.cols;
          if (best > o.height[px]) {
            o.height[px] = static_cast<float>(best);
            o.rgb[px] = b.color[0];
            o.rgb[nn + px] = b.color[1];
            o.rgb[2 * nn + px] = b.color[2];
          }
        }
      }
    }
  }
  return o;
}

}  // namespace scenesim
