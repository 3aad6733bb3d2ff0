#include "pickplace/scenesim/camera.hpp"

#include "pickplace/errors.hpp"

namespace scenesim {

CameraSpec look_at_camera(const Vec3& eye, const Vec3& target, int width, int height,
                          double focal) {
  Vec3 f = normalized(target - eye);
  Vec3 up{0, 0, 1};
  Vec3 r = normalized(cross(f, up));
  Vec3 d = cross(f, r);  // camera y axis points down in the world
  CameraSpec c;
  c.width = width;
  c.height = height;
  c.fx = c.fy = focal;
  c.cx = width / 2.0 - 0.5;
  c.cy = height / 2.0 - 0.5;
  c.cam_to_world.t = eye;
  c.cam_to_world.R.m = {r.x, d.x, f.x, r.y, d.y, f.y, r.z, d.z, f.z};
  return c;
}

std::vector<CameraSpec> camera_preset(const std::string& name) {
  int w, h;
  double f;
  if (name == "desk") {
    w = 320, h = 240, f = 240;
  } else if (name == "full") {
    w = 640, h = 480, f = 480;
  } else if (name == "micro") {
    w = 128, h = 96, f = 96;
  } else {
    throw pickplace::ContractError("camera_preset: unknown preset '" + name + "'");
  }
  return {
      look_at_camera({0.65, 0.0, 0.55}, {0.0, 0.0, 0.05}, w, h, f),
      look_at_camera({0.30, 0.55, 0.50}, {0.0, 0.05, 0.05}, w, h, f),
      look_at_camera({0.30, -0.55, 0.50}, {0.0, -0.05, 0.05}, w, h, f),
  };
}

}  // namespace scenesim
