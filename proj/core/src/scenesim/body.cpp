#include "pickplace/scenesim/body.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "pickplace/errors.hpp"

namespace scenesim {

using pickplace::IoError;

const Body* SceneState::find(const std::string& name) const {
  for (const auto& b : bodies)
    if (b.name == name) return &b;
  return nullptr;
}

Body* SceneState::find(const std::string& name) {
  for (auto& b : bodies)
    if (b.name == name) return &b;
  return nullptr;
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void save_scene(std::ostream& os, const SceneState& s) {
  os << "scene 1\n";
  os << "bodies " << s.bodies.size() << "\n";
  for (const auto& b : s.bodies) {
    os << "body " << b.name << " movable " << (b.movable ? 1 : 0) << " height "
       << fmt_double(b.height) << " color " << fmt_double(b.color[0]) << " "
       << fmt_double(b.color[1]) << " " << fmt_double(b.color[2]) << "\n";
    os << "verts " << b.footprint.size();
    for (const auto& v : b.footprint) os << " " << fmt_double(v.x) << " " << fmt_double(v.y);
    os << "\n";
    os << "pose " << fmt_double(b.pose.t.x) << " " << fmt_double(b.pose.t.y) << " "
       << fmt_double(b.pose.t.z);
    for (double m : b.pose.R.m) os << " " << fmt_double(m);
    os << "\n";
  }
}

void save_scene_file(const std::string& path, const SceneState& s) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("save_scene: cannot open " + path);
  save_scene(f, s);
  if (!f) throw IoError("save_scene: write failed for " + path);
}

SceneState load_scene(std::istream& is) {
  auto expect = [&](const std::string& tok) {
    std::string s;
    if (!(is >> s) || s != tok) throw IoError("load_scene: expected '" + tok + "'");
  };
  expect("scene");
  int version = 0;
  if (!(is >> version) || version != 1) throw IoError("load_scene: unsupported version");
  expect("bodies");
  size_t n = 0;
  if (!(is >> n)) throw IoError("load_scene: bad body count");
  SceneState s;
  s.bodies.resize(n);
  for (auto& b : s.bodies) {
    expect("body");
    int movable = 0;
    if (!(is >> b.name)) throw IoError("load_scene: bad body name");
    expect("movable");
    is >> movable;
    b.movable = movable != 0;
    expect("height");
    is >> b.height;
    expect("color");
    is >> b.color[0] >> b.color[1] >> b.color[2];
    expect("verts");
    size_t m = 0;
    is >> m;
    b.footprint.resize(m);
    for (auto& v : b.footprint) is >> v.x >> v.y;
    expect("pose");
    is >> b.pose.t.x >> b.pose.t.y >> b.pose.t.z;
    for (auto& e : b.pose.R.m) is >> e;
    if (!is) throw IoError("load_scene: truncated body record");
  }
  return s;
}

SceneState load_scene_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("load_scene: cannot open " + path);
  return load_scene(f);
}

}  // namespace scenesim
