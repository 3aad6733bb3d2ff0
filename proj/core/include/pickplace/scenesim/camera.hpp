#pragma once

#include <string>
#include <vector>

#include "pickplace/scenesim/geometry.hpp"

namespace scenesim {

// Pinhole RGB-D camera. cam_to_world maps camera-frame points (x right,
// y down, z forward) into the world; intrinsics follow u = fx*X/Z + cx with
// pixel (row i, col j) sampled at continuous coords (j+0.5, i+0.5).
struct CameraSpec {
  int width = 320, height = 240;
  double fx = 240, fy = 240, cx = 159.5, cy = 119.5;
  Pose3 cam_to_world;
};

CameraSpec look_at_camera(const Vec3& eye, const Vec3& target, int width, int height,
                          double focal);

// Three-camera rigs around the desk: "desk" (320x240), "full" (640x480),
// "micro" (128x96, tests).
std::vector<CameraSpec> camera_preset(const std::string& name);

}  // namespace scenesim
