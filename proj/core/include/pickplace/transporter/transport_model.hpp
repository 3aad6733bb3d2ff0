#pragma once

#include "pickplace/tensorgrad/fcn.hpp"

namespace transporter {

// Two-stream placing head. The query stream psi is run over a k-binned
// rotation stack of the observation pivoted at the pick, a c x c crop of its
// features around the pick becomes the correlation kernel for each bin, and
// the key stream phi is run once over the unrotated observation. The k
// cross-correlation maps, jointly softmaxed, are V_place.
template <typename T>
class TransportModelT {
 public:
  // cfg describes one stream (in 4, out d); both streams share the layout
  // but not the weights. crop must be odd.
  TransportModelT(tensorgrad::FcnConfig cfg, int k, int crop, tensorgrad::Rng rng);

  // obs: [4,H,W] -> V_place [k,H,W], sums to 1 over all of H*W*k.
  tensorgrad::TensorT<T> forward(const tensorgrad::TensorT<T>& obs, int pick_u,
                                 int pick_v) const;
  // The raw correlation maps [k,H,W] before the softmax.
  tensorgrad::TensorT<T> correlation(const tensorgrad::TensorT<T>& obs, int pick_u,
                                     int pick_v) const;
  // Query features for the full rotation stack, [k,d,H,W]; exposed so the
  // crop-consistency property (features computed on the full image, then
  // cropped) is directly testable.
  tensorgrad::TensorT<T> query_features(const tensorgrad::TensorT<T>& obs, int pick_u,
                                        int pick_v) const;

  int k() const { return k_; }
  int crop() const { return crop_; }
  int d() const { return psi_.config().out_channels; }
  const std::vector<tensorgrad::TensorT<T>>& params() const { return params_; }
  const tensorgrad::FcnConfig& config() const { return psi_.config(); }

 private:
  tensorgrad::HourglassFCNT<T> psi_, phi_;
  int k_, crop_;
  std::vector<tensorgrad::TensorT<T>> params_;
};

using TransportModel = TransportModelT<float>;

extern template class TransportModelT<float>;
extern template class TransportModelT<double>;

}  // namespace transporter
