#pragma once

#include <array>

#include "pickplace/tensorgrad/fcn.hpp"

namespace transporter {

// Regression extension for the out-of-plane degrees of freedom. Two extra
// streams produce 24-channel features split into three disjoint 8-channel
// groups; each group's cross-correlation map feeds its own 3-layer 32-wide
// MLP that maps a correlation scalar to one quantity: roll, pitch, or
// z-height. Evaluated at a decoded (pixel, bin) at inference, and over a
// 7x7-pixel / +-1-bin window around the label during training.
template <typename T>
class Se3ModelT {
 public:
  static constexpr int kGroups = 3;
  static constexpr int kGroupChannels = 8;
  static constexpr int kMlpWidth = 32;
  static constexpr int kWindow = 7;  // pixels per side, clipped at borders

  Se3ModelT(tensorgrad::FcnConfig cfg, int k, int crop, tensorgrad::Rng rng);

  // Correlation maps, one [k,H,W] tensor per group, scaled by
  // 1/(crop*crop*kGroupChannels) so MLP inputs stay O(1).
  std::array<tensorgrad::TensorT<T>, kGroups> correlations(
      const tensorgrad::TensorT<T>& obs, int pick_u, int pick_v) const;

  // Apply group g's MLP to gathered correlation scalars [n,1] -> [n,1].
  tensorgrad::TensorT<T> head(int g, const tensorgrad::TensorT<T>& scalars) const;

  // Flat indices into a [k,H,W] map covering the training window around
  // (u, v, bin): kWindow x kWindow pixels clipped to the image, bin and its
  // two cyclic neighbours (deduplicated for small k).
  std::vector<int64_t> window_indices(int rows, int cols, int u, int v, int bin) const;

  // Inference: (roll, pitch, z) at one decoded (pixel, bin).
  std::array<double, kGroups> predict(
      const std::array<tensorgrad::TensorT<T>, kGroups>& maps, int64_t flat) const;

  int k() const { return k_; }
  int crop() const { return crop_; }
  const std::vector<tensorgrad::TensorT<T>>& params() const { return params_; }

 private:
  tensorgrad::HourglassFCNT<T> psi_, phi_;
  // mlps_[g] = {w1 [32,1], b1, w2 [32,32], b2, w3 [1,32], b3}
  std::array<std::array<tensorgrad::TensorT<T>, 6>, kGroups> mlps_;
  int k_, crop_;
  std::vector<tensorgrad::TensorT<T>> params_;
};

using Se3Model = Se3ModelT<float>;

extern template class Se3ModelT<float>;
extern template class Se3ModelT<double>;

}  // namespace transporter
