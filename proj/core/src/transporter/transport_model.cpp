#include "pickplace/transporter/transport_model.hpp"

#include "pickplace/errors.hpp"
#include "pickplace/transporter/obs.hpp"

namespace transporter {

using namespace tensorgrad;

namespace {
FcnConfig stream_cfg(FcnConfig cfg) {
  cfg.in_channels = kObsChannels;
  cfg.final_relu = false;  // Eq. 1 correlates raw features
  return cfg;
}
}  // namespace

template <typename T>
TransportModelT<T>::TransportModelT(FcnConfig cfg, int k, int crop, Rng rng)
    : psi_(stream_cfg(cfg), rng.substream("psi"), "psi"),
      phi_(stream_cfg(cfg), rng.substream("phi"), "phi"),
      k_(k),
      crop_(crop) {
  if (k < 1) throw pickplace::ContractError("TransportModel: k must be >= 1");
  if (crop < 1 || crop % 2 == 0)
    throw pickplace::ContractError("TransportModel: crop must be odd and positive");
  params_ = psi_.params();
  params_.insert(params_.end(), phi_.params().begin(), phi_.params().end());
}

template <typename T>
TensorT<T> TransportModelT<T>::query_features(const TensorT<T>& obs, int pick_u,
                                              int pick_v) const {
  if (obs.ndim() != 3 || obs.dim(0) != kObsChannels)
    throw pickplace::DimensionError("TransportModel: expected [4,H,W] observation, got " +
                                    shape_str(obs.shape()));
  TensorT<T> stack = rotation_stack(obs, k_, pick_u, pick_v);  // [k,4,H,W]
  return psi_.forward(stack);                                  // [k,d,H,W]
}

template <typename T>
TensorT<T> TransportModelT<T>::correlation(const TensorT<T>& obs, int pick_u,
                                           int pick_v) const {
  TensorT<T> feats = query_features(obs, pick_u, pick_v);
  TensorT<T> kernels = crop_stack(feats, pick_u, pick_v, crop_);  // [k,d,c,c]
  TensorT<T> key = phi_.forward(obs);                             // [d,H,W]
  return correlate(key, kernels, psi_.config().pad);              // [k,H,W]
}

template <typename T>
TensorT<T> TransportModelT<T>::forward(const TensorT<T>& obs, int pick_u,
                                       int pick_v) const {
  return image_softmax(correlation(obs, pick_u, pick_v));
}

template class TransportModelT<float>;
template class TransportModelT<double>;

}  // namespace transporter
