#include <cmath>

#include "pickplace/errors.hpp"
#include "pickplace/scenesim/sim.hpp"
#include "task_detail.hpp"

namespace scenesim {

using pickplace::ContractError;
using tensorgrad::Rng;

namespace {

using namespace detail;

// Index of the first/random unsolved goal object.
int pick_unsolved(const Scene& sc, OracleMode mode, Rng& rng) {
  std::vector<int> unsolved;
  for (size_t i = 0; i < sc.goal.objects.size(); ++i) {
    GoalSpec single;
    single.objects.push_back(sc.goal.objects[i]);
    if (pose_metric(sc.state, single) < 1.0) unsolved.push_back(static_cast<int>(i));
  }
  if (unsolved.empty()) throw ContractError("oracle: all goal objects already satisfied");
  if (mode == OracleMode::kDeterministic) return unsolved.front();
  return unsolved[rng.uniform_index(unsolved.size())];
}

Vec2 pick_point(const Body& body, OracleMode mode, Rng& rng) {
  if (mode == OracleMode::kDeterministic) {
    Vec2 c = polygon_centroid(body.footprint);
    return body.pose.apply_xy(c);
  }
  Vec2 local = sample_in_polygon(body.footprint, rng);
  return body.pose.apply_xy(local);
}

// Noise inside the success region: disc in translation, interval in yaw.
Pose3 noisy_goal(const Pose3& goal, const ObjectGoal& og, bool use_rotation, Rng& rng) {
  double r = 0.45 * og.tol_t * std::sqrt(rng.uniform());
  double a = rng.uniform(-M_PI, M_PI);
  Pose3 out = goal;
  out.t.x += r * std::cos(a);
  out.t.y += r * std::sin(a);
  if (use_rotation) {
    double dyaw = rng.uniform(-0.45, 0.45) * og.tol_rot;
    out.R = out.R * Mat3::rot_z(dyaw);
  }
  return out;
}

}  // namespace

Action oracle(const TaskSpec& spec, const Scene& scene, OracleMode mode, Rng& rng) {
  int gi = pick_unsolved(scene, mode, rng);
  const ObjectGoal& og = scene.goal.objects[gi];
  const Body* body = scene.state.find(og.body);
  if (!body) throw ContractError("oracle: missing goal body");

  size_t ai = 0;
  if (mode == OracleMode::kStochastic && og.alternatives.size() > 1)
    ai = rng.uniform_index(og.alternatives.size());
  const GoalAlternative& alt = og.alternatives[ai];

  Vec2 p = pick_point(*body, mode, rng);
  Action act;
  act.pick = Pose3::translation(p.x, p.y, 0.0);

  Pose3 goal = alt.pose;
  if (mode == OracleMode::kStochastic) goal = noisy_goal(goal, og, alt.use_rotation, rng);

  if (alt.use_rotation) {
    // Rigidly carry the body to the (noised) goal pose.
    act.place = goal * body->pose.inverse() * act.pick;
  } else {
    // Rotation-free goal: translate the body's origin onto the goal point,
    // keeping its orientation.
    Vec3 d = goal.t - body->pose.t;
    act.place = Pose3::translation(p.x + d.x, p.y + d.y, d.z);
  }
  if (spec.action_space == ActionSpace::kSe2) {
    // Planar tasks demand planar actions: flatten any numeric drift.
    act.place.t.z = 0.0;
    act.place.R = Mat3::rot_z(act.place.yaw());
  }
  return act;
}

}  // namespace scenesim
