#pragma once

#include <string>

#include "pickplace/errors.hpp"

namespace pickplace {

// Axis-aligned workspace bounds on the table plane, meters.
struct Bounds {
  double xmin = -0.25, xmax = 0.25;
  double ymin = -0.5, ymax = 0.5;
};

// A top-down grid over bounds. Rows index x, columns index y; pixel (0,0)
// covers the (xmin, ymin) corner and pixel centers sit at half-pixel
// offsets: x = xmin + (u + 0.5) * pixel_size.
struct GridSpec {
  Bounds bounds;
  double pixel_size = 0.00625;

  int rows() const;
  int cols() const;
};

// Presets: desk (80x160 at 6.25 mm), full (160x320 at 3.125 mm), micro
// (32x64 at 15.625 mm, for fast tests).
GridSpec grid_preset(const std::string& name);

}  // namespace pickplace
