#include "pickplace/scenesim/task.hpp"

#include <cmath>

#include "pickplace/errors.hpp"
#include "task_detail.hpp"

namespace scenesim {

using pickplace::ContractError;
using pickplace::SamplingError;

TaskId task_id_from_string(const std::string& name) {
  if (name == "block-insertion") return TaskId::kBlockInsertion;
  if (name == "block-insertion-2dof") return TaskId::kBlockInsertion2Dof;
  if (name == "block-insertion-6dof") return TaskId::kBlockInsertion6Dof;
  if (name == "place-red-in-green") return TaskId::kPlaceRedInGreen;
  if (name == "align-box-corner") return TaskId::kAlignBoxCorner;
  throw ContractError("unknown task '" + name + "'");
}

std::string to_string(TaskId id) {
  switch (id) {
    case TaskId::kBlockInsertion: return "block-insertion";
    case TaskId::kBlockInsertion2Dof: return "block-insertion-2dof";
    case TaskId::kBlockInsertion6Dof: return "block-insertion-6dof";
    case TaskId::kPlaceRedInGreen: return "place-red-in-green";
    case TaskId::kAlignBoxCorner: return "align-box-corner";
  }
  throw ContractError("unknown task id");
}

std::vector<TaskId> all_task_ids() {
  return {TaskId::kBlockInsertion, TaskId::kBlockInsertion2Dof, TaskId::kBlockInsertion6Dof,
          TaskId::kPlaceRedInGreen, TaskId::kAlignBoxCorner};
}

TaskSpec make_task(TaskId id) {
  TaskSpec s;
  s.id = id;
  s.metric = MetricKind::kPose;
  switch (id) {
    case TaskId::kBlockInsertion:
    case TaskId::kBlockInsertion2Dof:
    case TaskId::kAlignBoxCorner:
      s.action_space = ActionSpace::kSe2;
      s.max_steps = 1;
      break;
    case TaskId::kBlockInsertion6Dof:
      s.action_space = ActionSpace::kSe3;
      s.max_steps = 1;
      break;
    case TaskId::kPlaceRedInGreen:
      s.action_space = ActionSpace::kSe2;
      s.max_steps = 5;  // up to 3 blocks plus slack
      break;
  }
  return s;
}

TaskSpec make_task(const std::string& name) { return make_task(task_id_from_string(name)); }

namespace detail {

Polygon l_polygon(double s) {
  double a = 0.04 * s;
  return {{-a, -a}, {a, -a}, {a, 0.0}, {0.0, 0.0}, {0.0, a}, {-a, a}};
}

Polygon rect_polygon(double w, double h) {
  double x = w / 2, y = h / 2;
  return {{-x, -y}, {x, -y}, {x, y}, {-x, y}};
}

Polygon ngon_polygon(int n, double radius) {
  Polygon p;
  p.reserve(n);
  for (int i = 0; i < n; ++i) {
    double a = 2.0 * M_PI * i / n;
    p.push_back({radius * std::cos(a), radius * std::sin(a)});
  }
  return p;
}

Polygon marker_polygon(double leg, double width) {
  return {{0, 0}, {leg, 0}, {leg, width}, {width, width}, {width, leg}, {0, leg}};
}

std::vector<GoalAlternative> corner_goals(const Pose3& marker, double w, double h) {
  std::vector<GoalAlternative> alts;
  double yaw = marker.yaw();
  Vec2 c1 = marker.apply_xy({w / 2, h / 2});
  alts.push_back({Pose3::planar(c1.x, c1.y, yaw), 2, true});
  Vec2 c2 = marker.apply_xy({h / 2, w / 2});
  alts.push_back({Pose3::planar(c2.x, c2.y, wrap_angle(yaw + M_PI / 2)), 2, true});
  return alts;
}

Vec2 sample_in_polygon(const Polygon& p, tensorgrad::Rng& rng) {
  Aabb bb = polygon_aabb(p);
  for (int i = 0; i < kMaxAttempts; ++i) {
    Vec2 q{rng.uniform(bb.xmin, bb.xmax), rng.uniform(bb.ymin, bb.ymax)};
    if (point_in_polygon(q, p)) return q;
  }
  throw SamplingError("sample_in_polygon: no interior point found");
}

Pose3 sample_planar_pose(const Polygon& footprint, const pickplace::Bounds& b,
                         tensorgrad::Rng& rng, double fixed_yaw) {
  double yaw = fixed_yaw > -1e8 ? fixed_yaw : rng.uniform(-M_PI, M_PI);
  Polygon rot = transform_polygon(footprint, Pose3::planar(0, 0, yaw));
  Aabb bb = polygon_aabb(rot);
  double xlo = b.xmin + kEdgeMargin - bb.xmin;
  double xhi = b.xmax - kEdgeMargin - bb.xmax;
  double ylo = b.ymin + kEdgeMargin - bb.ymin;
  double yhi = b.ymax - kEdgeMargin - bb.ymax;
  if (xhi < xlo || yhi < ylo) throw SamplingError("sample_planar_pose: footprint too large");
  return Pose3::planar(rng.uniform(xlo, xhi), rng.uniform(ylo, yhi), yaw);
}

}  // namespace detail
}  // namespace scenesim
