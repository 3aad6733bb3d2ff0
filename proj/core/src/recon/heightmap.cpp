#include "pickplace/recon/heightmap.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

namespace pickplace {

namespace {
int span_pixels(double lo, double hi, double pixel_size) {
  double n = (hi - lo) / pixel_size;
  int r = static_cast<int>(std::lround(n));
  if (r <= 0 || std::abs(n - r) > 1e-9)
    throw ContractError("GridSpec: bounds are not an integer number of pixels");
  return r;
}
}  // namespace

int GridSpec::rows() const { return span_pixels(bounds.xmin, bounds.xmax, pixel_size); }
int GridSpec::cols() const { return span_pixels(bounds.ymin, bounds.ymax, pixel_size); }

GridSpec grid_preset(const std::string& name) {
  GridSpec g;
  if (name == "desk") {
    g.pixel_size = 0.00625;
  } else if (name == "full") {
    g.pixel_size = 0.003125;
  } else if (name == "micro") {
    g.pixel_size = 0.015625;
  } else {
    throw ContractError("grid_preset: unknown preset '" + name + "'");
  }
  return g;
}

}  // namespace pickplace

namespace recon {

Heightmap::Heightmap(const pickplace::GridSpec& g) : grid(g) {
  data.assign(4 * plane(), 0.f);
}

float& Heightmap::at(int channel, int u, int v) {
  return data[static_cast<size_t>(channel) * plane() +
              static_cast<size_t>(u) * cols() + v];
}

float Heightmap::at(int channel, int u, int v) const {
  return data[static_cast<size_t>(channel) * plane() +
              static_cast<size_t>(u) * cols() + v];
}

scenesim::Vec2 Heightmap::pix_to_world(int u, int v) const {
  return {grid.bounds.xmin + (u + 0.5) * grid.pixel_size,
          grid.bounds.ymin + (v + 0.5) * grid.pixel_size};
}

bool Heightmap::in_bounds(double x, double y) const {
  return x >= grid.bounds.xmin && x < grid.bounds.xmax && y >= grid.bounds.ymin &&
         y < grid.bounds.ymax;
}

void Heightmap::world_to_pix(double x, double y, int& u, int& v) const {
  if (!in_bounds(x, y))
    throw pickplace::RangeError("world_to_pix: point outside workspace bounds");
  u = static_cast<int>((x - grid.bounds.xmin) / grid.pixel_size);
  v = static_cast<int>((y - grid.bounds.ymin) / grid.pixel_size);
  u = std::min(u, rows() - 1);
  v = std::min(v, cols() - 1);
}

void save_heightmap(const std::string& path, const Heightmap& hm) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw pickplace::IoError("save_heightmap: cannot open " + path);
  char header[512];
  int len = std::snprintf(header, sizeof(header),
                          "heightmap 1\nrows %d cols %d\npixel_size %.17g\n"
                          "bounds %.17g %.17g %.17g %.17g\n",
                          hm.rows(), hm.cols(), hm.grid.pixel_size, hm.grid.bounds.xmin,
                          hm.grid.bounds.xmax, hm.grid.bounds.ymin, hm.grid.bounds.ymax);
  os.write(header, len);
  os.write(reinterpret_cast<const char*>(hm.data.data()),
           static_cast<std::streamsize>(hm.data.size() * 4));
  if (!os) throw pickplace::IoError("save_heightmap: write failed: " + path);
}

Heightmap load_heightmap(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw pickplace::IoError("load_heightmap: cannot open " + path);
  std::string tag;
  int version = 0, rows = 0, cols = 0;
  pickplace::GridSpec grid;
  std::string key;
  is >> tag >> version;
  if (!is || tag != "heightmap" || version != 1)
    throw pickplace::IoError("load_heightmap: bad header in " + path);
  is >> key >> rows;
  if (!is || key != "rows") throw pickplace::IoError("load_heightmap: expected rows");
  is >> key >> cols;
  if (!is || key != "cols") throw pickplace::IoError("load_heightmap: expected cols");
  is >> key >> grid.pixel_size;
  if (!is || key != "pixel_size") throw pickplace::IoError("load_heightmap: expected pixel_size");
  is >> key >> grid.bounds.xmin >> grid.bounds.xmax >> grid.bounds.ymin >> grid.bounds.ymax;
  if (!is || key != "bounds") throw pickplace::IoError("load_heightmap: expected bounds");
  is.get();  // newline before payload
  if (rows <= 0 || cols <= 0 || grid.pixel_size <= 0)
    throw pickplace::IoError("load_heightmap: invalid dimensions");

  Heightmap hm;
  hm.grid = grid;
  if (hm.rows() != rows || hm.cols() != cols)
    throw pickplace::IoError("load_heightmap: header dimensions disagree with bounds");
  hm.data.resize(static_cast<size_t>(4) * rows * cols);
  is.read(reinterpret_cast<char*>(hm.data.data()),
          static_cast<std::streamsize>(hm.data.size() * 4));
  if (!is) throw pickplace::IoError("load_heightmap: truncated payload in " + path);
  return hm;
}

}  // namespace recon
