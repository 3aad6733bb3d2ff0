#pragma once

#include "pickplace/tensorgrad/fcn.hpp"

namespace transporter {

// Picking attention: one FCN from the 4-channel observation to a single
// logit map, normalized by an image-wide softmax into V_pick.
template <typename T>
class PickModelT {
 public:
  PickModelT(tensorgrad::FcnConfig cfg, tensorgrad::Rng rng);

  // obs: [4,H,W] -> V_pick [H,W], sums to 1.
  tensorgrad::TensorT<T> forward(const tensorgrad::TensorT<T>& obs) const;

  // The raw logit map [H,W] before the softmax.
  tensorgrad::TensorT<T> logits(const tensorgrad::TensorT<T>& obs) const;

  const std::vector<tensorgrad::TensorT<T>>& params() const { return net_.params(); }
  const tensorgrad::FcnConfig& config() const { return net_.config(); }

 private:
  tensorgrad::HourglassFCNT<T> net_;
};

using PickModel = PickModelT<float>;

extern template class PickModelT<float>;
extern template class PickModelT<double>;

}  // namespace transporter
