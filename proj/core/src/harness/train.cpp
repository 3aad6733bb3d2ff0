#include "pickplace/harness/train.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "pickplace/errors.hpp"
#include "pickplace/harness/augment.hpp"
#include "pickplace/tensorgrad/adam.hpp"

namespace fs = std::filesystem;

namespace harness {

std::vector<Sample> load_samples(const std::string& dataset_root, const DatasetMeta& meta) {
  std::vector<Sample> samples;
  for (int e = 0; e < meta.n_episodes; ++e) {
    EpisodeRecord ep = load_episode(dataset_root, meta, e, false);
    for (auto& step : ep.steps) {
      samples.push_back({std::move(step.obs), step.action});
    }
  }
  return samples;
}

TrainResult run_training(const TrainConfig& cfg, const std::string& dataset_root,
                         ModelHooks& hooks) {
  if (cfg.iterations < 1) throw pickplace::ContractError("run_training: iterations must be >= 1");
  DatasetMeta meta = load_meta(dataset_root);
  std::vector<Sample> samples = load_samples(dataset_root, meta);
  if (samples.empty()) throw pickplace::ContractError("run_training: dataset has no samples");

  scenesim::TaskSpec spec = scenesim::make_task(meta.task);
  std::vector<scenesim::CameraSpec> cameras = scenesim::camera_preset(meta.cameras);
  pickplace::GridSpec grid = pickplace::grid_preset(meta.grid);

  fs::create_directories(cfg.out_dir);
  std::ofstream loss_log(fs::path(cfg.out_dir) / "loss.csv");
  if (!loss_log) throw pickplace::IoError("run_training: cannot write to " + cfg.out_dir);
  loss_log << "iter,loss\n";
  std::ofstream val_log(fs::path(cfg.out_dir) / "val.csv");
  val_log << "iter,score\n";

  tensorgrad::AdamT<float> opt(hooks.params, {cfg.lr});
  tensorgrad::Rng root(cfg.seed);
  tensorgrad::Rng sample_rng = root.substream("sample");
  tensorgrad::Rng aug_root = root.substream("augment");

  TrainResult result;
  std::string best_path = (fs::path(cfg.out_dir) / "best.ckpt").string();
  std::string final_path = (fs::path(cfg.out_dir) / "final.ckpt").string();

  for (int it = 1; it <= cfg.iterations; ++it) {
    size_t idx = static_cast<size_t>(sample_rng.uniform_index(samples.size()));
    Sample sample = samples[idx];
    if (cfg.augment) {
      tensorgrad::Rng step_rng = aug_root.substream(std::to_string(it));
      AugmentedSample aug = augment_se2(sample.obs, sample.action, step_rng);
      sample.obs = std::move(aug.obs);
      sample.action = aug.action;
    }

    tensorgrad::Tensor loss = hooks.loss(sample);
    double value = loss.item();
    if (!std::isfinite(value)) {
      throw pickplace::NumericError("run_training: loss is not finite at iteration " +
                                    std::to_string(it) + " (sample " + std::to_string(idx) +
                                    ")");
    }
    if (it == 1) result.first_loss = value;
    result.final_loss = value;
    loss_log << it << "," << value << "\n";

    opt.zero_grad();
    tensorgrad::backward(loss);
    opt.step();

    bool last = it == cfg.iterations;
    if (cfg.eval_every > 0 && (it % cfg.eval_every == 0 || last)) {
      EvalReport val = evaluate_policy(spec, hooks.policy,
                                       val_seed_list(meta.base_seed, cfg.val_episodes),
                                       cameras, grid, cfg.jobs);
      val_log << it << "," << val.mean_score << "\n";
      val_log.flush();
      if (val.mean_score >= result.best_val_score) {
        result.best_val_score = val.mean_score;
        result.best_val_iter = it;
        hooks.save(best_path);
        result.best_checkpoint = best_path;
      }
    }
  }

  hooks.save(final_path);
  result.final_checkpoint = final_path;
  return result;
}

TrainResult train_transporter(const TrainConfig& cfg, const std::string& dataset_root) {
  DatasetMeta meta = load_meta(dataset_root);
  transporter::AgentConfig acfg = cfg.agent;
  acfg.grid = meta.grid;
  transporter::Agent agent(acfg);
  int k = acfg.k;

  ModelHooks hooks;
  hooks.params = agent.params();
  hooks.loss = [&agent, k](const Sample& s) {
    transporter::GridAction label = transporter::encode_action(s.action, s.obs, k);
    auto x = transporter::preprocess<float>(s.obs);
    auto v_pick = agent.pick().forward(x);
    auto v_place = agent.transport().forward(x, label.pick_u, label.pick_v);
    auto loss = transporter::transporter_loss(v_pick, v_place, label);
    if (agent.se3()) {
      auto maps = agent.se3()->correlations(x, label.pick_u, label.pick_v);
      loss = tensorgrad::add(loss, transporter::se3_loss(*agent.se3(), maps, label));
    }
    return loss;
  };
  hooks.save = [&agent, &meta](const std::string& path) {
    agent.save(path, {{"task", meta.task},
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
