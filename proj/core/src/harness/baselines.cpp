#include "pickplace/harness/baselines.hpp"

#include "pickplace/errors.hpp"
#include "pickplace/tensorgrad/checkpoint.hpp"

namespace harness {

using namespace tensorgrad;
using transporter::GridAction;

template <typename T>
NoTransportModelT<T>::NoTransportModelT(const transporter::AgentConfig& cfg)
    : cfg_(cfg), grid_(pickplace::grid_preset(cfg.grid)) {
  Rng rng(cfg_.seed);
  FcnConfig pick_cfg = fcn_preset(cfg_.net, transporter::kObsChannels, 1);
  pick_cfg.pad = cfg_.pad;
  pick_.emplace(pick_cfg, rng.substream("pick_init"));
  FcnConfig place_cfg = fcn_preset(cfg_.net, transporter::kObsChannels, cfg_.k);
  place_cfg.pad = cfg_.pad;
  place_.emplace(place_cfg, rng.substream("place_init"), "place");
}

template <typename T>
TensorT<T> NoTransportModelT<T>::forward_pick(const TensorT<T>& obs) const {
  return pick_->forward(obs);
}

template <typename T>
TensorT<T> NoTransportModelT<T>::forward_place(const TensorT<T>& obs) const {
  return image_softmax(place_->forward(obs));
}

template <typename T>
GridAction NoTransportModelT<T>::act_grid(const recon::Heightmap& hm) const {
  if (hm.rows() != grid_.rows() || hm.cols() != grid_.cols())
    throw pickplace::DimensionError(
        "NoTransportModel: heightmap grid does not match the configured preset");
  TensorT<T> obs = transporter::preprocess<T>(hm);
  GridAction ga;
  TensorT<T> v_pick = pick_->forward(obs);
  transporter::argmax_pick(v_pick, ga.pick_u, ga.pick_v);
  TensorT<T> v_place = forward_place(obs);
  transporter::argmax_place(v_place, ga.place_u, ga.place_v, ga.place_bin);
  return ga;
}

template <typename T>
scenesim::Action NoTransportModelT<T>::act(const recon::Heightmap& hm) const {
  return transporter::decode_action(act_grid(hm), hm, cfg_.k, false);
}

template <typename T>
std::vector<TensorT<T>> NoTransportModelT<T>::params() const {
  std::vector<TensorT<T>> out = pick_->params();
  const auto& pp = place_->params();
  out.insert(out.end(), pp.begin(), pp.end());
  return out;
}

template <typename T>
void NoTransportModelT<T>::save(const std::string& path,
                                const std::map<std::string, std::string>& extra_meta) const {
  Checkpoint ckpt;
  ckpt.meta = extra_meta;
  ckpt.meta["format"] = "no-transport-1";
  ckpt.meta["net"] = cfg_.net;
  ckpt.meta["grid"] = cfg_.grid;
  ckpt.meta["k"] = std::to_string(cfg_.k);
  ckpt.meta["pad"] = cfg_.pad == PadMode::kWrap ? "wrap" : "zero";
  for (const auto& p : params()) {
    std::vector<float> data(p.value().begin(), p.value().end());
    ckpt.params.emplace_back(p.name(), Tensor::from_data(p.shape(), std::move(data)));
  }
  save_checkpoint(path, ckpt);
}

template <typename T>
NoTransportModelT<T> NoTransportModelT<T>::load(const std::string& path) {
  Checkpoint ckpt = load_checkpoint(path);
  auto need = [&](const std::string& key) -> std::string {
    auto it = ckpt.meta.find(key);
    if (it == ckpt.meta.end())
      throw pickplace::IoError("no-transport checkpoint: missing meta key '" + key + "'");
    return it->second;
  };
  if (need("format") != "no-transport-1")
    throw pickplace::IoError("no-transport checkpoint: unrecognized format");
  transporter::AgentConfig cfg;
  cfg.net = need("net");
  cfg.grid = need("grid");
  cfg.k = std::stoi(need("k"));
  cfg.pad = need("pad") == "wrap" ? PadMode::kWrap : PadMode::kZero;
  NoTransportModelT<T> model(cfg);
  for (auto& p : model.params()) {
    const Tensor* src = ckpt.find(p.name());
    if (!src) throw pickplace::IoError("no-transport checkpoint: missing parameter " + p.name());
    if (src->shape() != p.shape())
      throw pickplace::DimensionError("no-transport checkpoint: shape mismatch for " + p.name());
    auto& dst = p.node_ptr()->value;
    for (size_t i = 0; i < dst.size(); ++i) dst[i] = static_cast<T>(src->value()[i]);
  }
  return model;
}

template class NoTransportModelT<float>;
template class NoTransportModelT<double>;

std::vector<int64_t> sample_negatives(int64_t size, int64_t positive, int count, Rng& rng) {
  if (size < 2) throw pickplace::ContractError("sample_negatives: need at least 2 candidates");
  std::vector<int64_t> out;
  out.reserve(static_cast<size_t>(count));
  while (static_cast<int>(out.size()) < count) {
    int64_t j = static_cast<int64_t>(rng.uniform_index(static_cast<uint64_t>(size)));
    if (j == positive) continue;
    out.push_back(j);
  }
  return out;
}

namespace {

constexpr int kNegatives = 100;

Tensor head_bce(const Tensor& logits, int64_t positive, Rng& rng) {
  std::vector<int64_t> idx{positive};
  std::vector<float> targets{1.f};
  for (int64_t j : sample_negatives(logits.size(), positive, kNegatives, rng)) {
    idx.push_back(j);
    targets.push_back(0.f);
  }
  return bce_logits(gather_flat(logits, idx), targets);
}

}  // namespace

Tensor per_pixel_ce_loss(const Tensor& pick_logits, const Tensor& place_logits,
                         const GridAction& label, Rng& rng) {
  if (pick_logits.ndim() != 2 || place_logits.ndim() != 3)
    throw pickplace::DimensionError("per_pixel_ce_loss: want pick [H,W], place [k,H,W]");
  const int H = pick_logits.dim(0), W = pick_logits.dim(1);
  int64_t pick_idx = static_cast<int64_t>(label.pick_u) * W + label.pick_v;
  int64_t place_idx =
      (static_cast<int64_t>(label.place_bin) * H + label.place_u) * W + label.place_v;
  return add(head_bce(pick_logits, pick_idx, rng), head_bce(place_logits, place_idx, rng));
}

TrainResult train_no_transport(const TrainConfig& cfg, const std::string& dataset_root) {
  DatasetMeta meta = load_meta(dataset_root);
  transporter::AgentConfig acfg = cfg.agent;
  acfg.grid = meta.grid;
  NoTransportModel model(acfg);
  int k = acfg.k;

  ModelHooks hooks;
  hooks.params = model.params();
  hooks.loss = [&model, k](const Sample& s) {
    GridAction label = transporter::encode_action(s.action, s.obs, k);
    auto x = transporter::preprocess<float>(s.obs);
    return transporter::transporter_loss(model.forward_pick(x), model.forward_place(x), label);
  };
  hooks.save = [&model, &meta](const std::string& path) {
    model.save(path, {{"task", meta.task},
                      {"dataset_mode", meta.mode},
                      {"base_seed", std::to_string(meta.base_seed)},
                      {"cameras", meta.cameras},
                      {"n_demos", std::to_string(meta.n_episodes)}});
  };
  hooks.policy = [&model](const recon::Heightmap& hm, const scenesim::Env&) {
    return model.act(hm);
  };
  return run_training(cfg, dataset_root, hooks);
}

TrainResult train_per_pixel_ce(const TrainConfig& cfg, const std::string& dataset_root) {
  DatasetMeta meta = load_meta(dataset_root);
  transporter::AgentConfig acfg = cfg.agent;
  acfg.grid = meta.grid;
  acfg.se3 = false;
  transporter::Agent agent(acfg);
  int k = acfg.k;

  ModelHooks hooks;
  hooks.params = agent.params();
  hooks.loss = [&agent, k, rng = Rng(cfg.seed).substream("negatives")](
                   const Sample& s) mutable {
    GridAction label = transporter::encode_action(s.action, s.obs, k);
    auto x = transporter::preprocess<float>(s.obs);
    auto pick_logits = agent.pick().logits(x);
    auto place_logits = agent.transport().correlation(x, label.pick_u, label.pick_v);
    return per_pixel_ce_loss(pick_logits, place_logits, label, rng);
  };
  hooks.save = [&agent, &meta](const std::string& path) {
    agent.save(path, {{"task", meta.task},
                      {"loss", "per-pixel-ce"},
                      {"dataset_mode", meta.mode},
                      {"base_seed", std::to_string(meta.base_seed)},
                      {"cameras", meta.cameras},
                      {"n_demos", std::to_string(meta.n_episodes)}});
  };
  hooks.policy = [&agent](const recon::Heightmap& hm, const scenesim::Env&) {
    return agent.act(hm);
  };
  return run_training(cfg, dataset_root, hooks);
}

}  // namespace harness
