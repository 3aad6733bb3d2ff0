#include "pickplace/harness/evaluate.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <memory>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "pickplace/errors.hpp"
#include "pickplace/harness/dataset.hpp"

namespace harness {

namespace {

EpisodeEval run_episode(const scenesim::TaskSpec& spec, const PolicyFactory& factory,
                        uint64_t seed, const std::vector<scenesim::CameraSpec>& cameras,
                        const pickplace::GridSpec& grid) {
  scenesim::Env env(spec, seed);
  Policy policy = factory(seed);
  EpisodeEval ep;
  ep.seed = seed;
  while (!env.done()) {
    recon::Heightmap hm = recon::reconstruct(env.scene().state, cameras, grid);
    scenesim::Action a = policy(hm, env);
    ep.actions.push_back(a);
    env.step(a);
    ++ep.steps;
  }
  ep.reward = env.metric();
  ep.success = ep.reward >= 1.0 - 1e-9;
  return ep;
}

}  // namespace

EvalReport evaluate_policy(const scenesim::TaskSpec& spec, const PolicyFactory& factory,
                           const std::vector<uint64_t>& seeds,
                           const std::vector<scenesim::CameraSpec>& cameras,
                           const pickplace::GridSpec& grid, int jobs) {
  if (jobs < 1) throw pickplace::ContractError("evaluate_policy: jobs must be >= 1");
  EvalReport report;
  report.task = scenesim::to_string(spec.id);
  report.episodes = static_cast<int>(seeds.size());
  report.records.resize(seeds.size());

  if (jobs == 1 || seeds.size() <= 1) {
    for (size_t i = 0; i < seeds.size(); ++i)
      report.records[i] = run_episode(spec, factory, seeds[i], cameras, grid);
  } else {
    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= seeds.size()) return;
        try {
          report.records[i] = run_episode(spec, factory, seeds[i], cameras, grid);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    int n = std::min<int>(jobs, static_cast<int>(seeds.size()));
    pool.reserve(static_cast<size_t>(n));
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  double sum = 0.0;
  for (const auto& ep : report.records) sum += ep.reward * 100.0;
  if (!seeds.empty()) report.mean_score = sum / static_cast<double>(seeds.size());
  return report;
}

EvalReport evaluate_policy(const scenesim::TaskSpec& spec, const Policy& policy,
                           const std::vector<uint64_t>& seeds,
                           const std::vector<scenesim::CameraSpec>& cameras,
                           const pickplace::GridSpec& grid, int jobs) {
  return evaluate_policy(
      spec, [&policy](uint64_t) { return policy; }, seeds, cameras, grid, jobs);
}

PolicyFactory oracle_policy_factory(scenesim::OracleMode mode) {
  return [mode](uint64_t seed) -> Policy {
    auto rng = std::make_shared<tensorgrad::Rng>(tensorgrad::Rng(seed).substream("oracle"));
    return [mode, rng](const recon::Heightmap&, const scenesim::Env& env) {
      return env.oracle_action(mode, *rng);
    };
  };
}

std::vector<uint64_t> test_seed_list(uint64_t base, int n) {
  std::vector<uint64_t> s;
  s.reserve(static_cast<size_t>(n));
  for (int e = 0; e < n; ++e) s.push_back(test_seed(base, e));
  return s;
}

std::vector<uint64_t> val_seed_list(uint64_t base, int n) {
  std::vector<uint64_t> s;
  s.reserve(static_cast<size_t>(n));
  for (int e = 0; e < n; ++e) s.push_back(val_seed(base, e));
  return s;
}

void save_eval_report(const std::string& path, const EvalReport& report) {
  nlohmann::json j;
  j["task"] = report.task;
  j["n_demos"] = report.n_demos;
  j["episodes"] = report.episodes;
  j["mean_score"] = report.mean_score;
  auto pose_json = [](const scenesim::Pose3& p) {
    auto [roll, pitch, yaw] = p.R.rpy();
    return nlohmann::json::array({p.t.x, p.t.y, p.t.z, roll, pitch, yaw});
  };
  j["records"] = nlohmann::json::array();
  for (const auto& ep : report.records) {
    nlohmann::json r;
    r["seed"] = ep.seed;
    r["reward"] = ep.reward;
    r["success"] = ep.success;
    r["steps"] = ep.steps;
    r["actions"] = nlohmann::json::array();
    for (const auto& a : ep.actions) {
      r["actions"].push_back({{"pick", pose_json(a.pick)}, {"place", pose_json(a.place)}});
    }
    j["records"].push_back(std::move(r));
  }
  std::ofstream out(path);
  if (!out) throw pickplace::IoError("save_eval_report: cannot open " + path);
  out << j.dump(2) << "\n";
}

}  // namespace harness
