#include "pickplace/transporter/decode.hpp"

#include <cmath>

#include "pickplace/errors.hpp"

namespace transporter {

using scenesim::Mat3;
using scenesim::Pose3;

GridAction encode_action(const scenesim::Action& action, const recon::Heightmap& hm,
                         int k) {
  if (k < 1) throw pickplace::ContractError("encode_action: k must be >= 1");
  GridAction ga;
  hm.world_to_pix(action.pick.t.x, action.pick.t.y, ga.pick_u, ga.pick_v);
  hm.world_to_pix(action.place.t.x, action.place.t.y, ga.place_u, ga.place_v);
  // The label encodes the rigid transport R_place * R_pick^-1 (decode emits a
  // rotation-free pick, so the relative rotation is what must be preserved).
  Mat3 rel = action.place.R * action.pick.R.transposed();
  auto [roll, pitch, yaw] = rel.rpy();
  const double step = 2.0 * M_PI / k;
  long bin = std::lround(yaw / step);
  ga.place_bin = static_cast<int>(((bin % k) + k) % k);
  ga.roll = roll;
  ga.pitch = pitch;
  ga.z = action.place.t.z;
  return ga;
}

scenesim::Action decode_action(const GridAction& ga, const recon::Heightmap& hm, int k,
                               bool use_se3) {
  if (k < 1) throw pickplace::ContractError("decode_action: k must be >= 1");
  scenesim::Action act;
  scenesim::Vec2 p = hm.pix_to_world(ga.pick_u, ga.pick_v);
  act.pick = Pose3::translation(p.x, p.y, hm.height_at(ga.pick_u, ga.pick_v));

  scenesim::Vec2 q = hm.pix_to_world(ga.place_u, ga.place_v);
  const double yaw = ga.place_bin * 2.0 * M_PI / k;
  if (use_se3) {
    act.place = Pose3::from_rpy({q.x, q.y, ga.z}, ga.roll, ga.pitch, yaw);
  } else {
    act.place = Pose3::planar(q.x, q.y, yaw);
  }
  return act;
}

template <typename T>
void argmax_pick(const tensorgrad::TensorT<T>& v_pick, int& u, int& v) {
  if (v_pick.ndim() != 2)
    throw pickplace::DimensionError("argmax_pick: want [H,W], got " +
                                    tensorgrad::shape_str(v_pick.shape()));
  const int W = v_pick.dim(1);
  int64_t best = 0;
  const auto& val = v_pick.value();
  for (int64_t i = 1; i < static_cast<int64_t>(val.size()); ++i)
    if (val[i] > val[best]) best = i;
  u = static_cast<int>(best / W);
  v = static_cast<int>(best % W);
}

template <typename T>
void argmax_place(const tensorgrad::TensorT<T>& v_place, int& u, int& v, int& bin) {
  if (v_place.ndim() != 3)
    throw pickplace::DimensionError("argmax_place: want [k,H,W], got " +
                                    tensorgrad::shape_str(v_place.shape()));
  const int K = v_place.dim(0), H = v_place.dim(1), W = v_place.dim(2);
  const auto& val = v_place.value();
  const int64_t plane = static_cast<int64_t>(H) * W;
  // Pixel-major scan so ties resolve to the lowest pixel, then lowest bin.
  T best = val[0];
  u = v = bin = 0;
  for (int64_t p = 0; p < plane; ++p) {
    for (int w = 0; w < K; ++w) {
      T x = val[w * plane + p];
      if (x > best) {
        best = x;
        u = static_cast<int>(p / W);
        v = static_cast<int>(p % W);
        bin = w;
      }
    }
  }
}

template void argmax_pick(const tensorgrad::TensorT<float>&, int&, int&);
template void argmax_pick(const tensorgrad::TensorT<double>&, int&, int&);
template void argmax_place(const tensorgrad::TensorT<float>&, int&, int&, int&);
template void argmax_place(const tensorgrad::TensorT<double>&, int&, int&, int&);

}  // namespace transporter
