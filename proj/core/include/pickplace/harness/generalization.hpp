#pragma once

#include "pickplace/harness/evaluate.hpp"

namespace harness {

// The fixture's planar position (the only varying scene parameter of the
// 2-DoF insertion task). Throws ContractError if the scene has no fixture.
scenesim::Vec2 fixture_position(const scenesim::SceneState& state);

// Interpolation/extrapolation export: one row per training scene (split
// "train") and one per evaluated test episode (split "test") with its
// success bit and whether its fixture lies inside the convex hull of the
// training fixtures. Columns: fixture_x, fixture_y, split, success,
// inside_hull; train rows leave the last two empty.
void export_generalization_csv(const std::string& path, const EvalReport& report,
                               const std::string& train_dataset_root);

}  // namespace harness
