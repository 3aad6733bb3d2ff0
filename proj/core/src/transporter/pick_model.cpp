#include "pickplace/transporter/pick_model.hpp"

#include "pickplace/errors.hpp"
#include "pickplace/transporter/obs.hpp"

namespace transporter {

using namespace tensorgrad;

namespace {
FcnConfig pick_cfg(FcnConfig cfg) {
  cfg.in_channels = kObsChannels;
  cfg.out_channels = 1;
  cfg.final_relu = false;
  return cfg;
}
}  // namespace

template <typename T>
PickModelT<T>::PickModelT(FcnConfig cfg, Rng rng)
    : net_(pick_cfg(cfg), std::move(rng), "pick") {}

template <typename T>
TensorT<T> PickModelT<T>::forward(const TensorT<T>& obs) const {
  return image_softmax(logits(obs));
}

template <typename T>
TensorT<T> PickModelT<T>::logits(const TensorT<T>& obs) const {
  if (obs.ndim() != 3 || obs.dim(0) != kObsChannels)
    throw pickplace::DimensionError("PickModel: expected [4,H,W] observation, got " +
                                    shape_str(obs.shape()));
  TensorT<T> q = net_.forward(obs);  // [1,H,W]
  return reshape(q, {obs.dim(1), obs.dim(2)});
}

template class PickModelT<float>;
template class PickModelT<double>;

}  // namespace transporter
