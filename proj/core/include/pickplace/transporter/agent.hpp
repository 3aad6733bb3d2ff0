#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "pickplace/transporter/decode.hpp"
#include "pickplace/transporter/obs.hpp"
#include "pickplace/transporter/pick_model.hpp"
#include "pickplace/transporter/se3_model.hpp"
#include "pickplace/transporter/transport_model.hpp"

namespace transporter {

// Sum of the two attention cross-entropies against one-hot labels:
// -log V_pick[pick pixel] - log V_place[place pixel, place bin].
template <typename T>
tensorgrad::TensorT<T> transporter_loss(const tensorgrad::TensorT<T>& v_pick,
                                        const tensorgrad::TensorT<T>& v_place,
                                        const GridAction& label);

// The same loss taken on the raw maps before their softmaxes (pick logits
// [H,W], place correlation [k,H,W]), in the fused log-softmax form. Value
// and gradient match transporter_loss after image_softmax, but the fused
// form stays finite however far apart the logits drift, so training uses it.
template <typename T>
tensorgrad::TensorT<T> transporter_logits_loss(const tensorgrad::TensorT<T>& pick_logits,
                                               const tensorgrad::TensorT<T>& place_logits,
                                               const GridAction& label);

// Windowed regression loss for the SE(3) heads, teacher-forced at the label:
// mean Huber over a 7x7-pixel / +-1-bin window per channel, summed over the
// roll, pitch and z channels.
template <typename T>
tensorgrad::TensorT<T> se3_loss(const Se3ModelT<T>& model,
                                const std::array<tensorgrad::TensorT<T>, 3>& maps,
                                const GridAction& label);

struct AgentConfig {
  std::string net = "desk";   // FCN preset for every stream
  std::string grid = "desk";  // workspace grid preset
  int k = 36;                 // rotation bins
  int crop = 0;               // correlation crop side; 0 = derive from grid
  int d = 3;                  // transport feature channels
  bool se3 = false;           // enable the regression streams
  tensorgrad::PadMode pad = tensorgrad::PadMode::kZero;
  uint64_t seed = 7;          // weight init
};

// The full policy: pick attention + transport placing (+ optional SE(3)
// regression), with greedy action decoding and checkpoint round-trips.
template <typename T>
class AgentT {
 public:
  explicit AgentT(const AgentConfig& cfg);

  scenesim::Action act(const recon::Heightmap& hm) const;
  // The grid-space decision behind act(), for inspection and visualization.
  GridAction act_grid(const recon::Heightmap& hm) const;

  const AgentConfig& config() const { return cfg_; }
  const pickplace::GridSpec& grid() const { return grid_; }
  PickModelT<T>& pick() { return *pick_; }
  TransportModelT<T>& transport() { return *transport_; }
  Se3ModelT<T>* se3() { return se3_ ? &*se3_ : nullptr; }
  const PickModelT<T>& pick() const { return *pick_; }
  const TransportModelT<T>& transport() const { return *transport_; }
  const Se3ModelT<T>* se3() const { return se3_ ? &*se3_ : nullptr; }

  // Every trainable parameter, in stable order.
  std::vector<tensorgrad::TensorT<T>> params() const;

  void save(const std::string& path,
            const std::map<std::string, std::string>& extra_meta = {}) const;
  static AgentT load(const std::string& path);

 private:
  tensorgrad::TensorT<T> obs_tensor(const recon::Heightmap& hm) const;

  AgentConfig cfg_;
  pickplace::GridSpec grid_;
  std::optional<PickModelT<T>> pick_;
  std::optional<TransportModelT<T>> transport_;
  std::optional<Se3ModelT<T>> se3_;
};

using Agent = AgentT<float>;

extern template class AgentT<float>;
extern template class AgentT<double>;

}  // namespace transporter
