#pragma once

#include <array>
#include <vector>

#include "pickplace/recon/heightmap.hpp"
#include "pickplace/scenesim/camera.hpp"
#include "pickplace/scenesim/render.hpp"

namespace recon {

struct PointCloud {
  std::vector<scenesim::Vec3> points;
  std::vector<std::array<float, 3>> colors;
};

// Pinhole back-projection of every valid (depth > 0) pixel into the world
// frame. depth is [h*w] row-major meters along the camera z axis, rgb is
// planar [3, h, w].
PointCloud unproject(const std::vector<float>& depth, const std::vector<float>& rgb,
                     int width, int height, const scenesim::CameraSpec& cam);
PointCloud unproject(const scenesim::ViewImage& view, const scenesim::CameraSpec& cam);

// Orthographic max-fusion: each point lands in its (u, v) cell, the highest
// point per cell wins and carries its color. Cells no point reaches stay at
// height 0 with black color. Fusion is order-independent: ties on height
// resolve by lexicographic comparison of the color.
Heightmap fuse_ortho(const std::vector<PointCloud>& clouds,
                     const pickplace::GridSpec& grid);

// Render the scene from every camera, unproject, and fuse. The observation
// pipeline used by dataset generation and policy rollouts.
Heightmap reconstruct(const scenesim::SceneState& state,
                      const std::vector<scenesim::CameraSpec>& cams,
                      const pickplace::GridSpec& grid);

}  // namespace recon
