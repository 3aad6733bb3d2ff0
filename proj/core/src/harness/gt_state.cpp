#include "pickplace/harness/gt_state.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "pickplace/errors.hpp"
#include "pickplace/tensorgrad/adam.hpp"
#include "pickplace/tensorgrad/checkpoint.hpp"

namespace fs = std::filesystem;

namespace harness {

using namespace tensorgrad;

namespace {

constexpr double kYawScale = 10.0;  // 1 m of translation ~ 0.1 rad of rotation

std::vector<double> mode_mean(const Tensor& params, int K, int D) {
  const float* row = params.value().data();
  int best = 0;
  for (int k = 1; k < K; ++k)
    if (row[k] > row[best]) best = k;
  std::vector<double> mean(static_cast<size_t>(D));
  for (int j = 0; j < D; ++j) mean[static_cast<size_t>(j)] = row[K + best * D + j];
  return mean;
}

std::vector<float> pose_targets(const scenesim::Pose3& p) {
  return {static_cast<float>(p.t.x), static_cast<float>(p.t.y),
          static_cast<float>(kYawScale * p.yaw())};
}

}  // namespace

int gt_state_body_dim(const scenesim::TaskSpec& spec) {
  return spec.id == scenesim::TaskId::kPlaceRedInGreen ? 6 : 3;
}

std::vector<float> gt_state_features(const scenesim::SceneState& state,
                                     const scenesim::TaskSpec& spec, int slots) {
  std::vector<const scenesim::Body*> bodies;
  bodies.reserve(state.bodies.size());
  for (const auto& b : state.bodies) bodies.push_back(&b);
  std::sort(bodies.begin(), bodies.end(),
            [](const scenesim::Body* a, const scenesim::Body* b) { return a->name < b->name; });
  if (static_cast<int>(bodies.size()) > slots) bodies.resize(static_cast<size_t>(slots));

  const int per_body = gt_state_body_dim(spec);
  std::vector<float> z(static_cast<size_t>(slots) * per_body, 0.f);
  for (size_t i = 0; i < bodies.size(); ++i) {
    const scenesim::Body& b = *bodies[i];
    float* dst = z.data() + i * static_cast<size_t>(per_body);
    dst[0] = static_cast<float>(b.pose.t.x);
    dst[1] = static_cast<float>(b.pose.t.y);
    dst[2] = static_cast<float>(b.pose.yaw());
    if (per_body == 6) {
      dst[3] = b.color[0];
      dst[4] = b.color[1];
      dst[5] = b.color[2];
    }
  }
  return z;
}

std::vector<float> lift_features(const std::vector<float>& z) {
  std::vector<float> out;
  out.reserve(3 * z.size());
  out.insert(out.end(), z.begin(), z.end());
  for (float v : z) out.push_back(std::sin(v));
  for (float v : z) out.push_back(std::cos(v));
  return out;
}

GtStateModel::GtStateModel(const scenesim::TaskSpec& spec, const GtStateConfig& cfg, int slots)
    : spec_(spec), cfg_(cfg), slots_(slots) {
  if (spec_.action_space != scenesim::ActionSpace::kSe2)
    throw pickplace::ContractError("GtStateModel: the state baseline covers SE(2) tasks");
  if (slots_ < 1) throw pickplace::ContractError("GtStateModel: need at least one body slot");
  Rng root(cfg_.seed);
  for (int s = 0; s < stages(); ++s) {
    int out = cfg_.mixtures * (1 + 2 * target_dim(s));
    mlps_.push_back(make_mlp(input_dim(s), out, root.substream("gt" + std::to_string(s)),
                             "gt" + std::to_string(s)));
  }
}

int GtStateModel::input_dim(int stage) const {
  int raw = slots_ * gt_state_body_dim(spec_);
  if (stage == 1) raw += 3;  // the teacher-forced first pose
  return 3 * raw;
}

int GtStateModel::target_dim(int stage) const {
  (void)stage;
  return cfg_.two_step ? 3 : 6;
}

GtStateModel::Mlp GtStateModel::make_mlp(int in, int out, Rng rng, const std::string& prefix) {
  Mlp m;
  int h = cfg_.hidden;
  m.w1 = he_normal<float>({h, in}, in, rng, prefix + "/l1/w");
  m.b1 = Tensor::param({h}, std::vector<float>(static_cast<size_t>(h), 0.f), prefix + "/l1/b");
  m.w2 = he_normal<float>({h, h}, h, rng, prefix + "/l2/w");
  m.b2 = Tensor::param({h}, std::vector<float>(static_cast<size_t>(h), 0.f), prefix + "/l2/b");
  m.w3 = he_normal<float>({out, h}, h, rng, prefix + "/l3/w");
  m.b3 = Tensor::param({out}, std::vector<float>(static_cast<size_t>(out), 0.f),
                       prefix + "/l3/b");
  return m;
}

Tensor GtStateModel::forward(int stage, const Tensor& x, Rng* drop) const {
  if (stage < 0 || stage >= stages())
    throw pickplace::IndexError("GtStateModel: no stage " + std::to_string(stage));
  if (x.ndim() != 2 || x.dim(1) != input_dim(stage))
    throw pickplace::DimensionError("GtStateModel: bad input width for stage " +
                                    std::to_string(stage));
  const Mlp& m = mlps_[static_cast<size_t>(stage)];
  Tensor h = relu(linear(x, m.w1, m.b1));
  if (drop) h = dropout(h, cfg_.dropout, *drop);
  h = relu(linear(h, m.w2, m.b2));
  if (drop) h = dropout(h, cfg_.dropout, *drop);
  return linear(h, m.w3, m.b3);
}

scenesim::Action GtStateModel::act(const scenesim::Scene& scene) const {
  std::vector<float> z = gt_state_features(scene.state, spec_, slots_);
  Tensor x0 = Tensor::from_data({1, input_dim(0)}, lift_features(z));
  Tensor p0 = forward(0, x0);
  scenesim::Action a;
  if (!cfg_.two_step) {
    auto m = mode_mean(p0, cfg_.mixtures, 6);
    a.pick = scenesim::Pose3::planar(m[0], m[1], m[2] / kYawScale);
    a.place = scenesim::Pose3::planar(m[3], m[4], m[5] / kYawScale);
    return a;
  }
  auto pick = mode_mean(p0, cfg_.mixtures, 3);
  a.pick = scenesim::Pose3::planar(pick[0], pick[1], pick[2] / kYawScale);
  std::vector<float> z1 = z;
  z1.push_back(static_cast<float>(a.pick.t.x));
  z1.push_back(static_cast<float>(a.pick.t.y));
  z1.push_back(static_cast<float>(a.pick.yaw()));
  Tensor x1 = Tensor::from_data({1, input_dim(1)}, lift_features(z1));
  auto place = mode_mean(forward(1, x1), cfg_.mixtures, 3);
  a.place = scenesim::Pose3::planar(place[0], place[1], place[2] / kYawScale);
  return a;
}

std::vector<Tensor> GtStateModel::params() const {
  std::vector<Tensor> out;
  for (const auto& m : mlps_) {
    out.insert(out.end(), {m.w1, m.b1, m.w2, m.b2, m.w3, m.b3});
  }
  return out;
}

void GtStateModel::save(const std::string& path,
                        const std::map<std::string, std::string>& extra_meta) const {
  Checkpoint ckpt;
  ckpt.meta = extra_meta;
  ckpt.meta["format"] = "gt-state-1";
  ckpt.meta["task"] = scenesim::to_string(spec_.id);
  ckpt.meta["mixtures"] = std::to_string(cfg_.mixtures);
  ckpt.meta["hidden"] = std::to_string(cfg_.hidden);
  ckpt.meta["two_step"] = cfg_.two_step ? "1" : "0";
  ckpt.meta["slots"] = std::to_string(slots_);
  for (const auto& p : params()) {
    ckpt.params.emplace_back(p.name(), Tensor::from_data(p.shape(), p.value()));
  }
  save_checkpoint(path, ckpt);
}

GtStateModel GtStateModel::load(const std::string& path) {
  Checkpoint ckpt = load_checkpoint(path);
  auto need = [&](const std::string& key) -> std::string {
    auto it = ckpt.meta.find(key);
    if (it == ckpt.meta.end())
      throw pickplace::IoError("gt-state checkpoint: missing meta key '" + key + "'");
    return it->second;
  };
  if (need("format") != "gt-state-1")
    throw pickplace::IoError("gt-state checkpoint: unrecognized format");
  GtStateConfig cfg;
  cfg.mixtures = std::stoi(need("mixtures"));
  cfg.hidden = std::stoi(need("hidden"));
  cfg.two_step = need("two_step") == "1";
  GtStateModel model(scenesim::make_task(need("task")), cfg, std::stoi(need("slots")));
  for (auto& p : model.params()) {
    const Tensor* src = ckpt.find(p.name());
    if (!src) throw pickplace::IoError("gt-state checkpoint: missing parameter " + p.name());
    if (src->shape() != p.shape())
      throw pickplace::DimensionError("gt-state checkpoint: shape mismatch for " + p.name());
    p.node_ptr()->value = src->value();
  }
  return model;
}

Policy gt_state_policy(std::shared_ptr<GtStateModel> model) {
  return [model](const recon::Heightmap&, const scenesim::Env& env) {
    return model->act(env.scene());
  };
}

TrainResult train_gt_state(const GtStateConfig& cfg, const std::string& dataset_root) {
  if (cfg.steps < 1) throw pickplace::ContractError("train_gt_state: steps must be >= 1");
  DatasetMeta meta = load_meta(dataset_root);
  scenesim::TaskSpec spec = scenesim::make_task(meta.task);

  struct StateSample {
    scenesim::SceneState state;
    scenesim::Action action;
  };
  std::vector<StateSample> samples;
  int slots = 1;
  for (int e = 0; e < meta.n_episodes; ++e) {
    EpisodeRecord ep = load_episode(dataset_root, meta, e, false);
    for (auto& step : ep.steps) {
      slots = std::max(slots, static_cast<int>(step.scene.bodies.size()));
      samples.push_back({std::move(step.scene), step.action});
    }
  }
  if (samples.empty()) throw pickplace::ContractError("train_gt_state: dataset has no samples");

  auto model = std::make_shared<GtStateModel>(spec, cfg, slots);
  AdamT<float> opt(model->params(), {cfg.lr});
  Rng root(cfg.seed);
  Rng sample_rng = root.substream("sample");
  Rng drop_rng = root.substream("dropout");

  fs::create_directories(cfg.out_dir);
  std::ofstream loss_log(fs::path(cfg.out_dir) / "loss.csv");
  if (!loss_log) throw pickplace::IoError("train_gt_state: cannot write to " + cfg.out_dir);
  loss_log << "iter,loss\n";
  std::ofstream val_log(fs::path(cfg.out_dir) / "val.csv");
  val_log << "iter,score\n";

  std::vector<scenesim::CameraSpec> cameras = scenesim::camera_preset(meta.cameras);
  pickplace::GridSpec grid = pickplace::grid_preset(meta.grid);
  Policy policy = gt_state_policy(model);

  TrainResult result;
  std::string best_path = (fs::path(cfg.out_dir) / "best.ckpt").string();
  std::string final_path = (fs::path(cfg.out_dir) / "final.ckpt").string();
  const std::map<std::string, std::string> extra_meta = {
      {"task", meta.task},
      {"dataset_mode", meta.mode},
      {"base_seed", std::to_string(meta.base_seed)},
      {"grid", meta.grid},
      {"cameras", meta.cameras},
      {"n_demos", std::to_string(meta.n_episodes)}};
  const int K = cfg.mixtures;
  const float temp = static_cast<float>(cfg.temperature);

  for (int it = 1; it <= cfg.steps; ++it) {
    std::vector<size_t> batch(static_cast<size_t>(cfg.batch));
    for (auto& b : batch) b = static_cast<size_t>(sample_rng.uniform_index(samples.size()));

    Tensor loss;
    for (int stage = 0; stage < model->stages(); ++stage) {
      const int D = model->target_dim(stage);
      std::vector<float> xs, ts;
      for (size_t b : batch) {
        const StateSample& s = samples[b];
        std::vector<float> z = gt_state_features(s.state, spec, slots);
        if (stage == 1) {
          z.push_back(static_cast<float>(s.action.pick.t.x));
          z.push_back(static_cast<float>(s.action.pick.t.y));
          z.push_back(static_cast<float>(s.action.pick.yaw()));
        }
        std::vector<float> lifted = lift_features(z);
        xs.insert(xs.end(), lifted.begin(), lifted.end());
        if (model->stages() == 1) {
          auto tp = pose_targets(s.action.pick);
          auto tq = pose_targets(s.action.place);
          ts.insert(ts.end(), tp.begin(), tp.end());
          ts.insert(ts.end(), tq.begin(), tq.end());
        } else {
          auto t = pose_targets(stage == 0 ? s.action.pick : s.action.place);
          ts.insert(ts.end(), t.begin(), t.end());
        }
      }
      Tensor x = Tensor::from_data({cfg.batch, model->input_dim(stage)}, std::move(xs));
      Tensor target = Tensor::from_data({cfg.batch, D}, std::move(ts));
      Tensor nll = mdn_nll(model->forward(stage, x, &drop_rng), target, K, D, temp);
      loss = stage == 0 ? nll : add(loss, nll);
    }

    double value = loss.item();
    if (!std::isfinite(value))
      throw pickplace::NumericError("train_gt_state: NLL is not finite at iteration " +
                                    std::to_string(it));
    if (it == 1) result.first_loss = value;
    result.final_loss = value;
    loss_log << it << "," << value << "\n";

    opt.zero_grad();
    backward(loss);
    opt.step();

    bool last = it == cfg.steps;
    if (cfg.eval_every > 0 && (it % cfg.eval_every == 0 || last)) {
      EvalReport val = evaluate_policy(spec, policy,
                                       val_seed_list(meta.base_seed, cfg.val_episodes),
                                       cameras, grid, cfg.jobs);
      val_log << it << "," << val.mean_score << "\n";
      val_log.flush();
      if (val.mean_score >= result.best_val_score) {
        result.best_val_score = val.mean_score;
        result.best_val_iter = it;
        model->save(best_path, extra_meta);
        result.best_checkpoint = best_path;
      }
    }
  }

  model->save(final_path, extra_meta);
  result.final_checkpoint = final_path;
  return result;
}

}  // namespace harness
