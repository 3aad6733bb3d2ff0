#pragma once

#include "pickplace/recon/heightmap.hpp"
#include "pickplace/scenesim/task.hpp"
#include "pickplace/tensorgrad/tensor.hpp"

namespace transporter {

// A pick-and-place action in grid coordinates: pick pixel, place pixel,
// place rotation bin (yaw = bin * 2*pi / k), plus the out-of-plane extras
// carried by the regression heads.
struct GridAction {
  int pick_u = 0, pick_v = 0;
  int place_u = 0, place_v = 0;
  int place_bin = 0;
  double roll = 0, pitch = 0, z = 0;
};

// Grid-space label for a world-frame action (training supervision). The
// rotation bin is the nearest multiple of 2*pi/k to the place yaw; roll,
// pitch and z are taken from the place pose as-is.
GridAction encode_action(const scenesim::Action& action, const recon::Heightmap& hm, int k);

// World-frame action from grid coordinates. The pick pose is a pure
// translation at the heightmap surface. With use_se3 the place pose composes
// roll and pitch under the binned yaw and places at height z; otherwise the
// place is planar.
scenesim::Action decode_action(const GridAction& ga, const recon::Heightmap& hm, int k,
                               bool use_se3);

// argmax of V_pick [H,W]; ties break to the lowest row-major pixel.
template <typename T>
void argmax_pick(const tensorgrad::TensorT<T>& v_pick, int& u, int& v);

// argmax of V_place [k,H,W]; ties break to the lowest row-major pixel first,
// then the lowest bin.
template <typename T>
void argmax_place(const tensorgrad::TensorT<T>& v_place, int& u, int& v, int& bin);

}  // namespace transporter
