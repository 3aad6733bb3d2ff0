#pragma once

#include "pickplace/harness/train.hpp"

namespace harness {

// Per-body ground-truth features, bodies sorted by name: x, y, yaw, plus the
// RGB color on place-red-in-green (where color identifies the goal objects).
// The vector is zero-padded to `slots` bodies; surplus bodies past `slots`
// are dropped from the (name-sorted) tail.
std::vector<float> gt_state_features(const scenesim::SceneState& state,
                                     const scenesim::TaskSpec& spec, int slots);
int gt_state_body_dim(const scenesim::TaskSpec& spec);

// z -> [z, sin z, cos z], tripling the input width.
std::vector<float> lift_features(const std::vector<float>& z);

struct GtStateConfig {
  int mixtures = 26;
  int hidden = 128;
  double dropout = 0.1;
  double temperature = 2.5;  // training temperature; decoding uses the raw weights
  int steps = 40000;
  int batch = 128;
  double lr = 2e-4;
  bool two_step = false;  // cascade a second pose MDN conditioned on the first
  int eval_every = 2000;
  int val_episodes = 10;
  int jobs = 1;  // worker threads for validation rollouts
  uint64_t seed = 11;
  std::string out_dir = "run-gt";
};

// Ground-truth-state mixture density baseline: an MLP (two hidden layers,
// dropout) from lifted state features to a mixture of Gaussians over the two
// SE(2) action poses. Rotations are equalized against translations at
// 1 m ~ 0.1 rad, so yaw enters the target space scaled by 10. The two-step
// variant regresses the pick pose first and conditions a second network on
// it (teacher-forced during training).
class GtStateModel {
 public:
  GtStateModel(const scenesim::TaskSpec& spec, const GtStateConfig& cfg, int slots);

  // Mixture parameters [B, K*(1+2*D)] for one stage from inputs [B, in].
  // Training mode applies dropout from `drop`.
  tensorgrad::Tensor forward(int stage, const tensorgrad::Tensor& x,
                             tensorgrad::Rng* drop = nullptr) const;

  // Greedy decode: the mean of the highest-weight mixture component.
  scenesim::Action act(const scenesim::Scene& scene) const;

  int stages() const { return cfg_.two_step ? 2 : 1; }
  int input_dim(int stage) const;
  int target_dim(int stage) const;  // 6 single-stage; 3 per cascaded stage
  int slots() const { return slots_; }
  const GtStateConfig& config() const { return cfg_; }
  const scenesim::TaskSpec& task() const { return spec_; }

  std::vector<tensorgrad::Tensor> params() const;
  void save(const std::string& path,
            const std::map<std::string, std::string>& extra_meta = {}) const;
  static GtStateModel load(const std::string& path);

 private:
  struct Mlp {
    tensorgrad::Tensor w1, b1, w2, b2, w3, b3;
  };
  Mlp make_mlp(int in, int out, tensorgrad::Rng rng, const std::string& prefix);

  scenesim::TaskSpec spec_;
  GtStateConfig cfg_;
  int slots_ = 0;
  std::vector<Mlp> mlps_;
};

TrainResult train_gt_state(const GtStateConfig& cfg, const std::string& dataset_root);

// Wrap a trained model as an evaluation policy (ignores the heightmap).
Policy gt_state_policy(std::shared_ptr<GtStateModel> model);

}  // namespace harness
