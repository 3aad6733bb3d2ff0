#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "pickplace/scenesim/geometry.hpp"

namespace scenesim {

// A rigid body: a polygon footprint extruded to `height`, posed in the
// world. The footprint lives in the body's local frame; the extrusion spans
// local z in [0, height].
struct Body {
  std::string name;
  Polygon footprint;
  double height = 0.02;
  std::array<float, 3> color{0.5f, 0.5f, 0.5f};
  Pose3 pose;
  bool movable = true;

  Polygon world_footprint() const { return transform_polygon(footprint, pose); }
  // Top surface height at the body's origin for a planar pose.
  double top_z() const { return pose.t.z + height; }
};

struct SceneState {
  std::vector<Body> bodies;

  const Body* find(const std::string& name) const;
  Body* find(const std::string& name);
};

// Text snapshot of a scene, full double precision (%.17g), byte-stable for
// a given state. Round-trips exactly.
void save_scene(std::ostream& os, const SceneState& s);
void save_scene_file(const std::string& path, const SceneState& s);
SceneState load_scene(std::istream& is);
SceneState load_scene_file(const std::string& path);

}  // namespace scenesim
