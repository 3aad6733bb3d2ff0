#include "pickplace/scenesim/sim.hpp"

#include <algorithm>
#include <cmath>

#include "pickplace/errors.hpp"
#include "task_detail.hpp"

namespace scenesim {

using pickplace::ContractError;
using pickplace::SamplingError;
using tensorgrad::Rng;

namespace {

using namespace detail;

bool collides_any(const SceneState& s, const Polygon& world_fp) {
  for (const auto& b : s.bodies)
    if (polygons_intersect(b.world_footprint(), world_fp)) return true;
  return false;
}

// Sample a collision-free planar pose for `body` against the current scene.
Pose3 place_body(const SceneState& s, const Polygon& fp, const pickplace::Bounds& bounds,
                 Rng& rng, double fixed_yaw = -1e9) {
  for (int i = 0; i < kMaxAttempts; ++i) {
    Pose3 p = sample_planar_pose(fp, bounds, rng, fixed_yaw);
    if (!collides_any(s, transform_polygon(fp, p))) return p;
  }
  throw SamplingError("reset: could not place a body collision-free");
}

Scene reset_block_insertion(const TaskSpec& spec, Rng& rng, bool two_dof, bool six_dof) {
  Scene sc;
  Polygon block_fp = l_polygon(kBlockScale);
  Polygon fixture_fp = l_polygon(kFixtureScale);

  Body fixture;
  fixture.name = "fixture";
  fixture.footprint = fixture_fp;
  fixture.height = kPlateHeight;
  fixture.color = kFixtureColor;
  fixture.movable = false;

  Body block;
  block.name = "block";
  block.footprint = block_fp;
  block.height = kBlockHeight;
  block.color = kRed;

  if (six_dof) {
    Body pedestal;
    pedestal.name = "pedestal";
    pedestal.footprint = rect_polygon(0.11, 0.11);
    pedestal.color = kPedestalColor;
    pedestal.movable = false;
    Pose3 base = sample_planar_pose(pedestal.footprint, spec.bounds, rng);
    double z = rng.uniform(0.02, 0.10);
    double roll = rng.uniform(-M_PI / 6, M_PI / 6);
    double pitch = rng.uniform(-M_PI / 6, M_PI / 6);
    double yaw = rng.uniform(-M_PI, M_PI);
    pedestal.pose = base;
    pedestal.height = std::max(0.005, z - 0.001);
    fixture.pose = Pose3::from_rpy({base.t.x, base.t.y, z}, roll, pitch, yaw);
    sc.state.bodies.push_back(pedestal);
    sc.state.bodies.push_back(fixture);
    block.pose = place_body(sc.state, block_fp, spec.bounds, rng);
    sc.state.bodies.push_back(block);
  } else if (two_dof) {
    // The block always starts at the same spot; only the fixture moves,
    // translation only.
    block.pose = Pose3::planar(k2DofBlockX, k2DofBlockY, 0.0);
    sc.state.bodies.push_back(block);
    fixture.pose = place_body(sc.state, fixture_fp, spec.bounds, rng, 0.0);
    sc.state.bodies.push_back(fixture);
  } else {
    fixture.pose = place_body(sc.state, fixture_fp, spec.bounds, rng);
    sc.state.bodies.push_back(fixture);
    block.pose = place_body(sc.state, block_fp, spec.bounds, rng);
    sc.state.bodies.push_back(block);
  }

  ObjectGoal og;
  og.body = "block";
  og.tol_t = 0.01;
  og.tol_rot = 15.0 * M_PI / 180.0;
  Pose3 fpose = sc.state.find("fixture")->pose;
  Pose3 goal = six_dof ? fpose * Pose3::translation(0, 0, kPlateHeight) : fpose;
  og.alternatives.push_back({goal, 1, true});
  sc.goal.objects.push_back(og);
  return sc;
}

Scene reset_place_red_in_green(const TaskSpec& spec, Rng& rng) {
  Scene sc;
  int n_bowls = 1 + static_cast<int>(rng.uniform_index(3));
  int n_blocks = 1 + static_cast<int>(rng.uniform_index(static_cast<uint64_t>(n_bowls)));
  Polygon bowl_fp = ngon_polygon(12, kBowlRadius);
  Polygon block_fp = rect_polygon(kSmallBlock, kSmallBlock);

  for (int i = 0; i < n_bowls; ++i) {
    Body bowl;
    bowl.name = "bowl" + std::to_string(i);
    bowl.footprint = bowl_fp;
    bowl.height = kBowlHeight;
    bowl.color = kGreen;
    bowl.pose = place_body(sc.state, bowl_fp, spec.bounds, rng);
    sc.state.bodies.push_back(bowl);
  }
  for (int i = 0; i < n_blocks; ++i) {
    Body block;
    block.name = "block" + std::to_string(i);
    block.footprint = block_fp;
    block.height = kBlockHeight;
    block.color = kRed;
    block.pose = place_body(sc.state, block_fp, spec.bounds, rng);
    sc.state.bodies.push_back(block);
  }
  for (int i = 0; i < kDistractors; ++i) {
    Body d;
    d.name = "distractor" + std::to_string(i);
    bool is_bowl = rng.uniform() < 0.5;
    d.footprint = is_bowl ? bowl_fp : block_fp;
    d.height = is_bowl ? kBowlHeight : kBlockHeight;
    d.color = kPalette[rng.uniform_index(kPalette.size())];
    d.pose = place_body(sc.state, d.footprint, spec.bounds, rng);
    sc.state.bodies.push_back(d);
  }

  for (int i = 0; i < n_blocks; ++i) {
    ObjectGoal og;
    og.body = "block" + std::to_string(i);
    og.tol_t = 0.04;  // bowl radius minus the block's half diagonal
    for (int b = 0; b < n_bowls; ++b) {
      const Body* bowl = sc.state.find("bowl" + std::to_string(b));
      og.alternatives.push_back({bowl->pose, 1, false});
    }
    sc.goal.objects.push_back(og);
  }
  return sc;
}

Scene reset_align_box_corner(const TaskSpec& spec, Rng& rng) {
  Scene sc;
  double w = rng.uniform(0.06, 0.12);
  double h = rng.uniform(0.06, 0.12);

  Body marker;
  marker.name = "marker";
  marker.footprint = marker_polygon(kMarkerLeg, kMarkerWidth);
  marker.height = kMarkerHeight;
  marker.color = kMarkerGreen;
  marker.movable = false;
  marker.pose = place_body(sc.state, marker.footprint, spec.bounds, rng);
  sc.state.bodies.push_back(marker);

  Body box;
  box.name = "box";
  box.footprint = rect_polygon(w, h);
  box.height = 0.03;
  box.color = kBoxColor;
  box.pose = place_body(sc.state, box.footprint, spec.bounds, rng);
  sc.state.bodies.push_back(box);

  ObjectGoal og;
  og.body = "box";
  og.tol_t = 0.01;
  og.tol_rot = 15.0 * M_PI / 180.0;
  og.alternatives = corner_goals(marker.pose, w, h);
  sc.goal.objects.push_back(og);
  return sc;
}

}  // namespace

Scene reset(const TaskSpec& spec, uint64_t seed) {
  Rng root(seed);
  Rng rng = root.substream("reset/" + to_string(spec.id));
  for (int attempt = 0; attempt < detail::kMaxAttempts; ++attempt) {
    Scene sc;
    switch (spec.id) {
      case TaskId::kBlockInsertion:
        sc = reset_block_insertion(spec, rng, false, false);
        break;
      case TaskId::kBlockInsertion2Dof:
        sc = reset_block_insertion(spec, rng, true, false);
        break;
      case TaskId::kBlockInsertion6Dof:
        sc = reset_block_insertion(spec, rng, false, true);
        break;
      case TaskId::kPlaceRedInGreen:
        sc = reset_place_red_in_green(spec, rng);
        break;
      case TaskId::kAlignBoxCorner:
        sc = reset_align_box_corner(spec, rng);
        break;
    }
    // The goal must start unsatisfied so episode reward equals task success.
    if (pose_metric(sc.state, sc.goal) == 0.0) return sc;
  }
  throw SamplingError("reset: could not generate a goal-unsatisfied scene");
}

StepResult step(const TaskSpec& spec, Scene& scene, const Action& action) {
  double before = episode_metric(spec, scene);

  // Find the topmost movable body containing the pick point.
  Vec2 p{action.pick.t.x, action.pick.t.y};
  Body* target = nullptr;
  double best_top = -1e300;
  for (auto& b : scene.state.bodies) {
    if (!b.movable) continue;
    if (!point_in_polygon(p, b.world_footprint())) continue;
    if (b.top_z() > best_top) {
      best_top = b.top_z();
      target = &b;
    }
  }

  StepResult r;
  if (target) {
    r.picked = true;
    r.picked_body = target->name;
    target->pose = action.place * action.pick.inverse() * target->pose;
  }
  double after = episode_metric(spec, scene);
  r.reward = after - before;
  r.done = after >= 1.0;
  return r;
}

double episode_metric(const TaskSpec& spec, const Scene& scene) {
  if (spec.metric == MetricKind::kPose) return pose_metric(scene.state, scene.goal);
  throw ContractError("episode_metric: no zone goal configured for this task");
}

bool Env::done() const { return metric() >= 1.0 || steps_ >= spec_.max_steps; }

StepResult Env::step(const Action& a) {
  if (done()) throw ContractError("Env::step: episode is already done");
  StepResult r = scenesim::step(spec_, scene_, a);
  ++steps_;
  r.done = r.done || steps_ >= spec_.max_steps;
  return r;
}

}  // namespace scenesim
