#pragma once

#include "pickplace/scenesim/task.hpp"
#include "pickplace/tensorgrad/rng.hpp"

namespace scenesim {

// A freshly reset episode: scene plus its goal.
struct Scene {
  SceneState state;
  GoalSpec goal;
};

// Deterministically build the initial scene for (task, seed). Placements are
// rejection-sampled collision-free and fully in bounds; configurations that
// already satisfy any part of the goal are resampled. Throws SamplingError
// if 1000 attempts cannot place a body.
Scene reset(const TaskSpec& spec, uint64_t seed);

struct StepResult {
  double reward = 0.0;  // metric delta from this step
  bool done = false;
  bool picked = false;        // false: empty pick, no-op
  std::string picked_body;    // name if picked
};

// Execute one suction pick-and-place: the topmost movable body whose world
// footprint contains the pick point is rigidly moved by place * pick^-1.
// An empty pick is a no-op that still consumes the step. `steps_taken` is
// incremented by the caller via Env, or tracked manually.
StepResult step(const TaskSpec& spec, Scene& scene, const Action& action);

// Fraction of goal objects currently at one of their goal alternatives.
double pose_metric(const SceneState& state, const GoalSpec& goal);

// Fraction of each listed body's bounding-box voxels (2 cm cubes) whose
// centers fall inside the zone prism, averaged over bodies. The zone is a
// polygon posed in the world.
double zone_metric(const SceneState& state, const std::vector<std::string>& bodies,
                   const Polygon& zone, const Pose3& zone_pose);

// Current episode score in [0, 1] under the task's metric.
double episode_metric(const TaskSpec& spec, const Scene& scene);

enum class OracleMode { kDeterministic, kStochastic };

// Scripted expert: returns an action that makes progress on one unsolved
// goal object. Deterministic mode picks at the object centroid and places
// exactly at the first goal alternative; stochastic mode samples the pick
// inside the object footprint and the place within the success region.
// Throws ContractError if everything is already solved.
Action oracle(const TaskSpec& spec, const Scene& scene, OracleMode mode, tensorgrad::Rng& rng);

// Convenience wrapper holding a task episode with step accounting.
class Env {
public:
  Env(const TaskSpec& spec, uint64_t seed) : spec_(spec), scene_(reset(spec, seed)) {}

  const TaskSpec& spec() const { return spec_; }
  const Scene& scene() const { return scene_; }
  int steps_taken() const { return steps_; }
  bool done() const;
  double metric() const { return episode_metric(spec_, scene_); }

  StepResult step(const Action& a);
  Action oracle_action(OracleMode mode, tensorgrad::Rng& rng) const {
    return scenesim::oracle(spec_, scene_, mode, rng);
  }

private:
  TaskSpec spec_;
  Scene scene_;
  int steps_ = 0;
};

}  // namespace scenesim
