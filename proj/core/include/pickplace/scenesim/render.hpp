#pragma once

#include <vector>

#include "pickplace/common.hpp"
#include "pickplace/scenesim/body.hpp"
#include "pickplace/scenesim/camera.hpp"

namespace scenesim {

// One rendered RGB-D view. rgb is planar [3][h][w] in [0,1]; depth is [h][w]
// camera-frame forward depth in meters, 0 where no geometry was hit.
struct ViewImage {
  int width = 0, height = 0;
  std::vector<float> rgb;
  std::vector<float> depth;
};

// Deterministic software rasterizer (perspective, z-buffered, flat Lambert
// shading). The table plane is drawn as part of every scene.
std::vector<ViewImage> render_views(const SceneState& state, const std::vector<CameraSpec>& cams);
ViewImage render_view(const SceneState& state, const CameraSpec& cam);

// Exact top-down orthographic render by vertical ray casting, the ground
// truth that camera-fused reconstructions are compared against. Heights are
// above the table plane; colors are unshaded body colors.
struct OrthoView {
  int rows = 0, cols = 0;
  std::vector<float> height;  // [rows][cols]
  std::vector<float> rgb;     // [3][rows][cols]
};
OrthoView render_ortho(const SceneState& state, const pickplace::GridSpec& grid);

}  // namespace scenesim
