#pragma once

#include <string>
#include <vector>

#include "pickplace/common.hpp"
#include "pickplace/scenesim/geometry.hpp"

namespace recon {

// Top-down orthographic reconstruction of the workspace. data is planar
// [4, rows, cols]: channels R, G, B in [0,1], then height in meters above
// the table (0 = table or unobserved).
struct Heightmap {
  pickplace::GridSpec grid;
  std::vector<float> data;

  Heightmap() = default;
  explicit Heightmap(const pickplace::GridSpec& g);

  int rows() const { return grid.rows(); }
  int cols() const { return grid.cols(); }
  int64_t plane() const { return static_cast<int64_t>(rows()) * cols(); }

  float& at(int channel, int u, int v);
  float at(int channel, int u, int v) const;
  float height_at(int u, int v) const { return at(3, u, v); }

  // Center of pixel (u, v) on the table plane.
  scenesim::Vec2 pix_to_world(int u, int v) const;
  // Pixel containing world point (x, y); throws RangeError outside bounds.
  void world_to_pix(double x, double y, int& u, int& v) const;
  bool in_bounds(double x, double y) const;
};

void save_heightmap(const std::string& path, const Heightmap& hm);
Heightmap load_heightmap(const std::string& path);

}  // namespace recon
