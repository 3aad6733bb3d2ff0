#include <algorithm>
#include <cmath>

#include "pickplace/errors.hpp"
#include "pickplace/scenesim/sim.hpp"

namespace scenesim {

using pickplace::ContractError;

namespace {

bool alternative_satisfied(const Body& body, const GoalAlternative& alt, double tol_t,
                           double tol_rot) {
  Vec3 dt = body.pose.t - alt.pose.t;
  if (norm(dt) > tol_t) return false;
  if (!alt.use_rotation) return true;
  int sym = std::max(1, alt.symmetry);
  for (int s = 0; s < sym; ++s) {
    Mat3 target = alt.pose.R * Mat3::rot_z(2.0 * M_PI * s / sym);
    if (geodesic_angle(target, body.pose.R) <= tol_rot) return true;
  }
  return false;
}

}  // namespace

double pose_metric(const SceneState& state, const GoalSpec& goal) {
  if (goal.objects.empty()) throw ContractError("pose_metric: empty goal");
  int solved = 0;
  for (const auto& og : goal.objects) {
    const Body* b = state.find(og.body);
    if (!b) throw ContractError("pose_metric: goal references missing body '" + og.body + "'");
    for (const auto& alt : og.alternatives)
      if (alternative_satisfied(*b, alt, og.tol_t, og.tol_rot)) {
        ++solved;
        break;
      }
  }
  return static_cast<double>(solved) / static_cast<double>(goal.objects.size());
}

double zone_metric(const SceneState& state, const std::vector<std::string>& bodies,
                   const Polygon& zone, const Pose3& zone_pose) {
  if (bodies.empty()) throw ContractError("zone_metric: no bodies listed");
  constexpr double kVoxel = 0.02;
  Polygon zone_world = transform_polygon(zone, zone_pose);
  double total = 0.0;
  for (const auto& name : bodies) {
    const Body* b = state.find(name);
    if (!b) throw ContractError("zone_metric: missing body '" + name + "'");
    // Voxelize the body's local bounding box so the count is intrinsic to
    // the body; rigid motions applied to body and zone together cancel.
    Aabb bb = polygon_aabb(b->footprint);
    int nx = std::max(1, static_cast<int>(std::ceil((bb.xmax - bb.xmin) / kVoxel)));
    int ny = std::max(1, static_cast<int>(std::ceil((bb.ymax - bb.ymin) / kVoxel)));
    int nz = std::max(1, static_cast<int>(std::ceil(b->height / kVoxel)));
    int inside = 0;
    for (int ix = 0; ix < nx; ++ix)
      for (int iy = 0; iy < ny; ++iy)
        for (int iz = 0; iz < nz; ++iz) {
          Vec3 local{bb.xmin + (ix + 0.5) * kVoxel, bb.ymin + (iy + 0.5) * kVoxel,
                     (iz + 0.5) * kVoxel};
          Vec3 world = b->pose.apply(local);
          if (point_in_polygon({world.x, world.y}, zone_world)) ++inside;
        }
    total += static_cast<double>(inside) / static_cast<double>(nx * ny * nz);
  }
  return total / static_cast<double>(bodies.size());
}

}  // namespace scenesim
