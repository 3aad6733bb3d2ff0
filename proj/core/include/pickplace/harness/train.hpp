#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pickplace/harness/dataset.hpp"
#include "pickplace/harness/evaluate.hpp"
#include "pickplace/transporter/agent.hpp"

namespace harness {

struct TrainConfig {
  transporter::AgentConfig agent;  // architecture of the model under training
  int iterations = 20000;
  double lr = 1e-4;
  bool augment = true;
  int eval_every = 500;   // validation cadence; 0 disables rollout validation
  int val_episodes = 10;  // held-out episodes per validation pass
  uint64_t seed = 0;      // sampling / augmentation streams
  int jobs = 1;           // worker threads for validation rollouts
  std::string out_dir = "run";
};

struct TrainResult {
  double first_loss = 0.0;
  double final_loss = 0.0;
  double best_val_score = -1.0;  // 0-100; -1 when validation disabled
  int best_val_iter = -1;
  std::string final_checkpoint;
  std::string best_checkpoint;
};

// One observation-action pair drawn from a stored demonstration.
struct Sample {
  recon::Heightmap obs;
  scenesim::Action action;
};

std::vector<Sample> load_samples(const std::string& dataset_root, const DatasetMeta& meta);

// What a trainable model must expose to the shared training loop. `loss`
// builds the one-sample loss graph; `save` writes a checkpoint; `policy` is
// the greedy decode used for validation rollouts.
struct ModelHooks {
  std::function<tensorgrad::Tensor(const Sample&)> loss;
  std::vector<tensorgrad::Tensor> params;
  std::function<void(const std::string& path)> save;
  Policy policy;
};

// The serialized training loop shared by the transporter and the FCN
// baselines: uniform sample draws, optional SE(2) augmentation, Adam on
// batch-1 losses, a loss log (loss.csv), periodic validation rollouts
// (val.csv) with best-checkpoint retention, and a final checkpoint.
// Aborts with NumericError on a non-finite loss.
TrainResult run_training(const TrainConfig& cfg, const std::string& dataset_root,
                         ModelHooks& hooks);

// Teacher-forced behavior cloning of the full agent on a demo dataset.
TrainResult train_transporter(const TrainConfig& cfg, const std::string& dataset_root);

}  // namespace harness
