#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pickplace/recon/fuse.hpp"
#include "pickplace/scenesim/camera.hpp"
#include "pickplace/scenesim/sim.hpp"

namespace harness {

// A policy maps the fused observation (plus the live env, for baselines that
// read ground-truth state) to the next action.
using Policy =
    std::function<scenesim::Action(const recon::Heightmap&, const scenesim::Env&)>;

// Builds the policy instance for one episode. Stateful policies (e.g. the
// scripted oracle, which consumes a random stream) get a fresh, episode-seed-
// deterministic instance, which keeps evaluation order-independent.
using PolicyFactory = std::function<Policy(uint64_t episode_seed)>;

struct EpisodeEval {
  uint64_t seed = 0;
  double reward = 0.0;  // final episode metric in [0, 1]
  bool success = false;
  int steps = 0;
  std::vector<scenesim::Action> actions;
};

struct EvalReport {
  std::string task;
  int n_demos = 0;  // training demonstrations behind the policy; 0 if n/a
  int episodes = 0;
  double mean_score = 0.0;  // mean reward on the 0-100 scale
  std::vector<EpisodeEval> records;
};

// Roll out the greedy policy on one episode per seed. Each step re-renders
// the cameras and fuses a fresh heightmap before querying the policy.
// Episodes are independent; jobs > 1 spreads them across threads without
// changing the result.
EvalReport evaluate_policy(const scenesim::TaskSpec& spec, const PolicyFactory& factory,
                           const std::vector<uint64_t>& seeds,
                           const std::vector<scenesim::CameraSpec>& cameras,
                           const pickplace::GridSpec& grid, int jobs = 1);

// Convenience overload for stateless policies shared across episodes.
EvalReport evaluate_policy(const scenesim::TaskSpec& spec, const Policy& policy,
                           const std::vector<uint64_t>& seeds,
                           const std::vector<scenesim::CameraSpec>& cameras,
                           const pickplace::GridSpec& grid, int jobs = 1);

// The scripted expert as a policy, consuming the same per-episode stream as
// demo generation ("oracle" substream of the episode seed).
PolicyFactory oracle_policy_factory(scenesim::OracleMode mode);

std::vector<uint64_t> test_seed_list(uint64_t base, int n);
std::vector<uint64_t> val_seed_list(uint64_t base, int n);

void save_eval_report(const std::string& path, const EvalReport& report);

}  // namespace harness
