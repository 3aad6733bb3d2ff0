#pragma once

#include "pickplace/harness/train.hpp"

namespace harness {

// Ablation without pick-conditioned placing: the same pick attention stream
// as the transporter, plus an unconditional place FCN that maps the
// observation straight to a k-bin map, jointly softmaxed over H*W*k.
template <typename T>
class NoTransportModelT {
 public:
  explicit NoTransportModelT(const transporter::AgentConfig& cfg);

  tensorgrad::TensorT<T> forward_pick(const tensorgrad::TensorT<T>& obs) const;
  // obs [4,H,W] -> V_place [k,H,W], sums to 1 over the whole stack.
  tensorgrad::TensorT<T> forward_place(const tensorgrad::TensorT<T>& obs) const;

  scenesim::Action act(const recon::Heightmap& hm) const;
  transporter::GridAction act_grid(const recon::Heightmap& hm) const;

  const transporter::AgentConfig& config() const { return cfg_; }
  transporter::PickModelT<T>& pick() { return *pick_; }
  std::vector<tensorgrad::TensorT<T>> params() const;

  void save(const std::string& path,
            const std::map<std::string, std::string>& extra_meta = {}) const;
  static NoTransportModelT load(const std::string& path);

 private:
  transporter::AgentConfig cfg_;
  pickplace::GridSpec grid_;
  std::optional<transporter::PickModelT<T>> pick_;
  std::optional<tensorgrad::HourglassFCNT<T>> place_;
};

using NoTransportModel = NoTransportModelT<float>;

extern template class NoTransportModelT<float>;
extern template class NoTransportModelT<double>;

// `count` random flat indices over [0, size), uniform over everything except
// the positive index (which is rejected and redrawn).
std::vector<int64_t> sample_negatives(int64_t size, int64_t positive, int count,
                                      tensorgrad::Rng& rng);

// Per-sample sigmoid cross-entropy loss on the raw pick and place logit
// maps: each head scores its labeled pixel as the single positive plus 100
// random negatives.
tensorgrad::Tensor per_pixel_ce_loss(const tensorgrad::Tensor& pick_logits,
                                     const tensorgrad::Tensor& place_logits,
                                     const transporter::GridAction& label,
                                     tensorgrad::Rng& rng);

TrainResult train_no_transport(const TrainConfig& cfg, const std::string& dataset_root);

// Transporter architecture trained with the per-pixel loss instead of the
// image-wide softmax.
TrainResult train_per_pixel_ce(const TrainConfig& cfg, const std::string& dataset_root);

}  // namespace harness
