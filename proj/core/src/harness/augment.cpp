#include "pickplace/harness/augment.hpp"

#include <cmath>

namespace harness {

using scenesim::Pose3;
using scenesim::Vec2;
using scenesim::Vec3;

namespace {

constexpr int kMaxTries = 100;
constexpr double kPi = 3.14159265358979323846;

Pose3 planar_about(double theta, double dx, double dy, const Vec2& center) {
  Pose3 g = Pose3::planar(0.0, 0.0, theta);
  Vec3 c{center.x, center.y, 0.0};
  Vec3 rc = g.R.apply(c);
  g.t = {c.x - rc.x + dx, c.y - rc.y + dy, 0.0};
  return g;
}

float sample_bilinear(const recon::Heightmap& hm, int channel, double uf, double vf) {
  int u0 = static_cast<int>(std::floor(uf));
  int v0 = static_cast<int>(std::floor(vf));
  double au = uf - u0;
  double av = vf - v0;
  double acc = 0.0;
  for (int du = 0; du <= 1; ++du) {
    for (int dv = 0; dv <= 1; ++dv) {
      int u = u0 + du;
      int v = v0 + dv;
      if (u < 0 || u >= hm.rows() || v < 0 || v >= hm.cols()) continue;
      double w = (du ? au : 1.0 - au) * (dv ? av : 1.0 - av);
      acc += w * hm.at(channel, u, v);
    }
  }
  return static_cast<float>(acc);
}

}  // namespace

recon::Heightmap warp_heightmap(const recon::Heightmap& obs, const Pose3& g) {
  recon::Heightmap out(obs.grid);
  Pose3 inv = g.inverse();
  double ps = obs.grid.pixel_size;
  for (int u = 0; u < out.rows(); ++u) {
    for (int v = 0; v < out.cols(); ++v) {
      Vec2 w = out.pix_to_world(u, v);
      Vec2 src = inv.apply_xy(w);
      double uf = (src.x - obs.grid.bounds.xmin) / ps - 0.5;
      double vf = (src.y - obs.grid.bounds.ymin) / ps - 0.5;
      for (int c = 0; c < 4; ++c) out.at(c, u, v) = sample_bilinear(obs, c, uf, vf);
    }
  }
  return out;
}

AugmentedSample augment_se2(const recon::Heightmap& obs, const scenesim::Action& action,
                            tensorgrad::Rng& rng) {
  const auto& b = obs.grid.bounds;
  Vec2 center{0.5 * (b.xmin + b.xmax), 0.5 * (b.ymin + b.ymax)};
  double half_dx = 0.25 * (b.xmax - b.xmin);
  double half_dy = 0.25 * (b.ymax - b.ymin);

  for (int attempt = 0; attempt < kMaxTries; ++attempt) {
    double theta = rng.uniform(-kPi, kPi);
    double dx = rng.uniform(-half_dx, half_dx);
    double dy = rng.uniform(-half_dy, half_dy);
    Pose3 g = planar_about(theta, dx, dy, center);
    Pose3 pick = g * action.pick;
    Pose3 place = g * action.place;
    if (!obs.in_bounds(pick.t.x, pick.t.y)) continue;
    if (!obs.in_bounds(place.t.x, place.t.y)) continue;
    AugmentedSample s;
    s.obs = warp_heightmap(obs, g);
    s.action = {pick, place};
    s.transform = g;
    return s;
  }
  return {obs, action, Pose3::identity(), true};
}

}  // namespace harness
