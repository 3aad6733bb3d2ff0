#include "pickplace/transporter/agent.hpp"

#include <map>

#include "pickplace/errors.hpp"
#include "pickplace/tensorgrad/checkpoint.hpp"

namespace transporter {

using namespace tensorgrad;

template <typename T>
TensorT<T> transporter_loss(const TensorT<T>& v_pick, const TensorT<T>& v_place,
                            const GridAction& label) {
  if (v_pick.ndim() != 2 || v_place.ndim() != 3)
    throw pickplace::DimensionError("transporter_loss: want V_pick [H,W], V_place [k,H,W]");
  const int H = v_pick.dim(0), W = v_pick.dim(1);
  if (v_place.dim(1) != H || v_place.dim(2) != W)
    throw pickplace::DimensionError("transporter_loss: V_pick / V_place grids disagree");
  int64_t pick_idx = static_cast<int64_t>(label.pick_u) * W + label.pick_v;
  int64_t place_idx =
      (static_cast<int64_t>(label.place_bin) * H + label.place_u) * W + label.place_v;
  return add(cross_entropy_onehot(v_pick, pick_idx),
             cross_entropy_onehot(v_place, place_idx));
}

template <typename T>
TensorT<T> transporter_logits_loss(const TensorT<T>& pick_logits,
                                   const TensorT<T>& place_logits, const GridAction& label) {
  if (pick_logits.ndim() != 2 || place_logits.ndim() != 3)
    throw pickplace::DimensionError(
        "transporter_logits_loss: want pick [H,W], place [k,H,W]");
  const int H = pick_logits.dim(0), W = pick_logits.dim(1);
  if (place_logits.dim(1) != H || place_logits.dim(2) != W)
    throw pickplace::DimensionError("transporter_logits_loss: pick / place grids disagree");
  int64_t pick_idx = static_cast<int64_t>(label.pick_u) * W + label.pick_v;
  int64_t place_idx =
      (static_cast<int64_t>(label.place_bin) * H + label.place_u) * W + label.place_v;
  return add(softmax_nll(pick_logits, pick_idx), softmax_nll(place_logits, place_idx));
}

template <typename T>
TensorT<T> se3_loss(const Se3ModelT<T>& model, const std::array<TensorT<T>, 3>& maps,
                    const GridAction& label) {
  const int H = maps[0].dim(1), W = maps[0].dim(2);
  auto idx = model.window_indices(H, W, label.place_u, label.place_v, label.place_bin);
  const int n = static_cast<int>(idx.size());
  const std::array<T, 3> targets = {static_cast<T>(label.roll), static_cast<T>(label.pitch),
                                    static_cast<T>(label.z)};
  TensorT<T> total;
  for (int g = 0; g < 3; ++g) {
    TensorT<T> preds = model.head(g, gather_flat(maps[g], idx));  // [n,1]
    TensorT<T> tgt = TensorT<T>::full({n, 1}, targets[g]);
    TensorT<T> m = mean(huber(preds, tgt, T(1)));
    total = g == 0 ? m : add(total, m);
  }
  return total;
}

template <typename T>
AgentT<T>::AgentT(const AgentConfig& cfg) : cfg_(cfg), grid_(pickplace::grid_preset(cfg.grid)) {
  if (cfg_.crop == 0) cfg_.crop = default_crop(grid_.rows(), grid_.cols());
  Rng rng(cfg_.seed);
  FcnConfig pick_cfg = fcn_preset(cfg_.net, kObsChannels, 1);
  pick_cfg.pad = cfg_.pad;
  pick_.emplace(pick_cfg, rng.substream("pick_init"));
  FcnConfig place_cfg = fcn_preset(cfg_.net, kObsChannels, cfg_.d);
  place_cfg.pad = cfg_.pad;
  transport_.emplace(place_cfg, cfg_.k, cfg_.crop, rng.substream("transport_init"));
  if (cfg_.se3) {
    FcnConfig se3_cfg = fcn_preset(cfg_.net, kObsChannels, 24);
    se3_cfg.pad = cfg_.pad;
    se3_.emplace(se3_cfg, cfg_.k, cfg_.crop, rng.substream("se3_init"));
  }
}

template <typename T>
TensorT<T> AgentT<T>::obs_tensor(const recon::Heightmap& hm) const {
  if (hm.rows() != grid_.rows() || hm.cols() != grid_.cols())
    throw pickplace::DimensionError("Agent: heightmap grid does not match the configured preset");
  return preprocess<T>(hm);
}

template <typename T>
GridAction AgentT<T>::act_grid(const recon::Heightmap& hm) const {
  TensorT<T> obs = obs_tensor(hm);
  GridAction ga;
  TensorT<T> v_pick = pick_->forward(obs);
  argmax_pick(v_pick, ga.pick_u, ga.pick_v);
  TensorT<T> v_place = transport_->forward(obs, ga.pick_u, ga.pick_v);
  argmax_place(v_place, ga.place_u, ga.place_v, ga.place_bin);
  if (se3_) {
    auto maps = se3_->correlations(obs, ga.pick_u, ga.pick_v);
    const int H = hm.rows(), W = hm.cols();
    int64_t flat =
        (static_cast<int64_t>(ga.place_bin) * H + ga.place_u) * W + ga.place_v;
    auto rpz = se3_->predict(maps, flat);
    ga.roll = rpz[0];
    ga.pitch = rpz[1];
    ga.z = rpz[2];
  }
  return ga;
}

template <typename T>
scenesim::Action AgentT<T>::act(const recon::Heightmap& hm) const {
  return decode_action(act_grid(hm), hm, cfg_.k, cfg_.se3);
}

template <typename T>
std::vector<TensorT<T>> AgentT<T>::params() const {
  std::vector<TensorT<T>> out = pick_->params();
  const auto& tp = transport_->params();
  out.insert(out.end(), tp.begin(), tp.end());
  if (se3_) {
    const auto& sp = se3_->params();
    out.insert(out.end(), sp.begin(), sp.end());
  }
  return out;
}

template <typename T>
void AgentT<T>::save(const std::string& path,
                     const std::map<std::string, std::string>& extra_meta) const {
  Checkpoint ckpt;
  ckpt.meta = extra_meta;
  ckpt.meta["format"] = "transporter-agent-1";
  ckpt.meta["net"] = cfg_.net;
  ckpt.meta["grid"] = cfg_.grid;
  ckpt.meta["k"] = std::to_string(cfg_.k);
  ckpt.meta["crop"] = std::to_string(cfg_.crop);
  ckpt.meta["d"] = std::to_string(cfg_.d);
  ckpt.meta["se3"] = cfg_.se3 ? "1" : "0";
  ckpt.meta["pad"] = cfg_.pad == PadMode::kWrap ? "wrap" : "zero";
  for (const auto& p : params()) {
    std::vector<float> data(p.value().begin(), p.value().end());
    ckpt.params.emplace_back(p.name(), Tensor::from_data(p.shape(), std::move(data)));
  }
  save_checkpoint(path, ckpt);
}

template <typename T>
AgentT<T> AgentT<T>::load(const std::string& path) {
  Checkpoint ckpt = load_checkpoint(path);
  auto need = [&](const std::string& key) -> std::string {
    auto it = ckpt.meta.find(key);
    if (it == ckpt.meta.end())
      throw pickplace::IoError("agent checkpoint: missing meta key '" + key + "'");
    return it->second;
  };
  if (need("format") != "transporter-agent-1")
    throw pickplace::IoError("agent checkpoint: unrecognized format");
  AgentConfig cfg;
  cfg.net = need("net");
  cfg.grid = need("grid");
  cfg.k = std::stoi(need("k"));
  cfg.crop = std::stoi(need("crop"));
  cfg.d = std::stoi(need("d"));
  cfg.se3 = need("se3") == "1";
  cfg.pad = need("pad") == "wrap" ? PadMode::kWrap : PadMode::kZero;
  AgentT<T> agent(cfg);
  for (auto& p : agent.params()) {
    const Tensor* src = ckpt.find(p.name());
    if (!src) throw pickplace::IoError("agent checkpoint: missing parameter " + p.name());
    if (src->shape() != p.shape())
      throw pickplace::DimensionError("agent checkpoint: shape mismatch for " + p.name());
    auto& dst = p.node_ptr()->value;
    for (size_t i = 0; i < dst.size(); ++i) dst[i] = static_cast<T>(src->value()[i]);
  }
  return agent;
}

#define INSTANTIATE(T)                                                                     \
  template TensorT<T> transporter_loss(const TensorT<T>&, const TensorT<T>&,              \
                                       const GridAction&);                                \
  template TensorT<T> transporter_logits_loss(const TensorT<T>&, const TensorT<T>&,       \
                                              const GridAction&);                         \
  template TensorT<T> se3_loss(const Se3ModelT<T>&, const std::array<TensorT<T>, 3>&,     \
                               const GridAction&);                                        \
  template class AgentT<T>;

INSTANTIATE(float)
INSTANTIATE(double)
#undef INSTANTIATE

}  // namespace transporter
