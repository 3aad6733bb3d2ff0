#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "pickplace/common.hpp"
#include "pickplace/scenesim/body.hpp"

namespace scenesim {

enum class TaskId {
  kBlockInsertion,
  kBlockInsertion2Dof,
  kBlockInsertion6Dof,
  kPlaceRedInGreen,
  kAlignBoxCorner,
};

enum class MetricKind { kPose, kZone };
enum class ActionSpace { kSe2, kSe3 };

TaskId task_id_from_string(const std::string& name);
std::string to_string(TaskId id);
std::vector<TaskId> all_task_ids();

struct TaskSpec {
  TaskId id;
  MetricKind metric = MetricKind::kPose;
  ActionSpace action_space = ActionSpace::kSe2;
  int max_steps = 1;
  pickplace::Bounds bounds;
};

// Registry: the one place task parameters come from.
TaskSpec make_task(TaskId id);
TaskSpec make_task(const std::string& name);

// One admissible target pose for an object. If use_rotation, the rotation
// error (geodesic, reduced modulo the z-axis symmetry order) must be within
// tol_rot; translation error within tol_t either way.
struct GoalAlternative {
  Pose3 pose;
  int symmetry = 1;  // z-axis rotational symmetry order of the object
  bool use_rotation = true;
};

struct ObjectGoal {
  std::string body;  // which body must reach one of the alternatives
  std::vector<GoalAlternative> alternatives;
  double tol_t = 0.01;
  double tol_rot = 15.0 * M_PI / 180.0;
};

struct GoalSpec {
  std::vector<ObjectGoal> objects;
};

// Pick-and-place action. Both poses are world-frame; for SE(2) tasks they
// are planar (z = 0, rotation about z only).
struct Action {
  Pose3 pick;
  Pose3 place;
};

}  // namespace scenesim
