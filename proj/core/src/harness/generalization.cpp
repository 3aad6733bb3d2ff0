#include "pickplace/harness/generalization.hpp"

#include <cstdio>
#include <fstream>

#include "pickplace/errors.hpp"
#include "pickplace/harness/dataset.hpp"

namespace harness {

using scenesim::Vec2;

Vec2 fixture_position(const scenesim::SceneState& state) {
  const scenesim::Body* fixture = state.find("fixture");
  if (!fixture)
    throw pickplace::ContractError("fixture_position: scene has no body named 'fixture'");
  return {fixture->pose.t.x, fixture->pose.t.y};
}

void export_generalization_csv(const std::string& path, const EvalReport& report,
                               const std::string& train_dataset_root) {
  DatasetMeta meta = load_meta(train_dataset_root);
  scenesim::TaskSpec spec = scenesim::make_task(meta.task);

  std::vector<Vec2> train_points;
  for (int e = 0; e < meta.n_episodes; ++e) {
    EpisodeRecord ep = load_episode(train_dataset_root, meta, e, false);
    if (ep.steps.empty()) continue;
    train_points.push_back(fixture_position(ep.steps.front().scene));
  }
  std::vector<Vec2> hull = scenesim::convex_hull(train_points);

  std::ofstream out(path);
  if (!out) throw pickplace::IoError("export_generalization_csv: cannot open " + path);
  out << "fixture_x,fixture_y,split,success,inside_hull\n";
  char row[128];
  for (const Vec2& p : train_points) {
    std::snprintf(row, sizeof(row), "%.6f,%.6f,train,,\n", p.x, p.y);
    out << row;
  }
  for (const EpisodeEval& ep : report.records) {
    scenesim::Scene scene = scenesim::reset(spec, ep.seed);
    Vec2 p = fixture_position(scene.state);
    bool inside = scenesim::point_in_convex_hull(p, hull);
    std::snprintf(row, sizeof(row), "%.6f,%.6f,test,%d,%d\n", p.x, p.y, ep.success ? 1 : 0,
                  inside ? 1 : 0);
    out << row;
  }
}

}  // namespace harness
