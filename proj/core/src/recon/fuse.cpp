#include "pickplace/recon/fuse.hpp"

#include <algorithm>

#include "pickplace/errors.hpp"

namespace recon {

PointCloud unproject(const std::vector<float>& depth, const std::vector<float>& rgb,
                     int width, int height, const scenesim::CameraSpec& cam) {
  const size_t n = static_cast<size_t>(width) * height;
  if (depth.size() != n)
    throw pickplace::DimensionError("unproject: depth size does not match width*height");
  if (rgb.size() != 3 * n)
    throw pickplace::DimensionError("unproject: rgb size does not match 3*width*height");
  if (width != cam.width || height != cam.height)
    throw pickplace::DimensionError("unproject: image size does not match camera spec");

  PointCloud pc;
  pc.points.reserve(n);
  pc.colors.reserve(n);
  for (int i = 0; i < height; ++i) {
    for (int j = 0; j < width; ++j) {
      size_t px = static_cast<size_t>(i) * width + j;
      double z = depth[px];
      if (z <= 0) continue;
      scenesim::Vec3 p_cam{(j + 0.5 - cam.cx) / cam.fx * z,
                           (i + 0.5 - cam.cy) / cam.fy * z, z};
      pc.points.push_back(cam.cam_to_world.apply(p_cam));
      pc.colors.push_back({rgb[px], rgb[n + px], rgb[2 * n + px]});
    }
  }
  return pc;
}

PointCloud unproject(const scenesim::ViewImage& view, const scenesim::CameraSpec& cam) {
  return unproject(view.depth, view.rgb, view.width, view.height, cam);
}

Heightmap fuse_ortho(const std::vector<PointCloud>& clouds,
                     const pickplace::GridSpec& grid) {
  Heightmap hm(grid);
  const int64_t plane = hm.plane();
  // Track which cells have been hit so a genuine height-0 point (the table)
  // still deposits its color over the initial black.
  std::vector<unsigned char> hit(plane, 0);
  for (const auto& pc : clouds) {
    if (pc.points.size() != pc.colors.size())
      throw pickplace::DimensionError("fuse_ortho: points/colors length mismatch");
    for (size_t k = 0; k < pc.points.size(); ++k) {
      const auto& p = pc.points[k];
      if (!hm.in_bounds(p.x, p.y)) continue;
      int u, v;
      hm.world_to_pix(p.x, p.y, u, v);
      int64_t px = static_cast<int64_t>(u) * hm.cols() + v;
      float h = static_cast<float>(std::max(0.0, p.z));
      const auto& c = pc.colors[k];
      float* cell_h = &hm.data[3 * plane + px];
      float* cell_r = &hm.data[px];
      float* cell_g = &hm.data[plane + px];
      float* cell_b = &hm.data[2 * plane + px];
      bool take;
      if (!hit[px]) {
        take = true;
      } else if (h != *cell_h) {
        take = h > *cell_h;
      } else if (c[0] != *cell_r) {
        take = c[0] > *cell_r;
      } else if (c[1] != *cell_g) {
        take = c[1] > *cell_g;
      } else {
        take = c[2] > *cell_b;
      }
      if (take) {
        hit[px] = 1;
        *cell_h = h;
        *cell_r = c[0];
        *cell_g = c[1];
        *cell_b = c[2];
      }
    }
  }
  return hm;
}

Heightmap reconstruct(const scenesim::SceneState& state,
                      const std::vector<scenesim::CameraSpec>& cams,
                      const pickplace::GridSpec& grid) {
  std::vector<PointCloud> clouds;
  clouds.reserve(cams.size());
  for (const auto& cam : cams)
    clouds.push_back(unproject(scenesim::render_view(state, cam), cam));
  return fuse_ortho(clouds, grid);
}

}  // namespace recon
