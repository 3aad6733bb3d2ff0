#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pickplace/errors.hpp"
#include "pickplace/harness/baselines.hpp"
#include "pickplace/harness/dataset.hpp"
#include "pickplace/harness/evaluate.hpp"
#include "pickplace/harness/gt_state.hpp"
#include "pickplace/harness/train.hpp"
#include "pickplace/recon/fuse.hpp"
#include "pickplace/scenesim/camera.hpp"
#include "pickplace/scenesim/render.hpp"
#include "pickplace/scenesim/sim.hpp"
#include "pickplace/tensorgrad/checkpoint.hpp"
#include "pickplace/tensorgrad/ops.hpp"
#include "pickplace/tensorgrad/rng.hpp"
#include "pickplace/transporter/agent.hpp"
#include "pickplace/transporter/obs.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// A post-parse contract violation (bad flag combination, missing required
// flag); maps to exit code 1 like any parser error.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Resolved options for one invocation. The parser enforces the basic
// invariants before a handler runs: read paths exist, numeric options are
// positive. -1 means "not set, use the model default".
struct RunConfig {
  std::string task;
  std::string dataset;
  std::string checkpoint;
  std::string out;
  std::string grid = "desk";
  std::string cameras = "desk";
  std::string net;  // empty: follow the grid preset
  std::string mode = "stoch";
  std::string model = "transporter";
  std::string oracle;
  uint64_t seed = 0;
  uint64_t init_seed = 7;
  int n = 10;
  int episodes = 20;
  int iterations = -1;
  double lr = -1;
  int k = 36;
  int crop = 0;
  int eval_every = -1;
  int val_episodes = 10;
  int runs = 20;
  int jobs = 1;
  int mixtures = 26;
  int batch = 128;
  double temperature = 2.5;
  bool augment = true;
  bool se3 = false;
  bool two_step = false;
};

std::vector<std::string> task_names() {
  std::vector<std::string> names;
  for (scenesim::TaskId id : scenesim::all_task_ids()) names.push_back(scenesim::to_string(id));
  return names;
}

scenesim::OracleMode parse_mode(const std::string& s) {
  return (s == "det" || s == "deterministic") ? scenesim::OracleMode::kDeterministic
                                              : scenesim::OracleMode::kStochastic;
}

std::string normalize_mode(const std::string& s) {
  return parse_mode(s) == scenesim::OracleMode::kDeterministic ? "det" : "stoch";
}

void write_manifest(const std::string& dir, const json& config) {
  fs::create_directories(dir);
  std::ofstream os(fs::path(dir) / "manifest.json");
  if (!os) throw pickplace::IoError("cannot write manifest.json in " + dir);
  os << config.dump(2) << "\n";
}

// Grayscale map -> planar rgb with the peak mapped to full intensity.
std::vector<float> heat_rgb(const std::vector<float>& map) {
  float peak = 0.0f;
  for (float v : map) peak = std::max(peak, v);
  const float scale = peak > 0.0f ? 1.0f / peak : 0.0f;
  std::vector<float> rgb(3 * map.size());
  for (size_t i = 0; i < map.size(); ++i) {
    float v = std::max(0.0f, map[i]) * scale;
    rgb[i] = rgb[map.size() + i] = rgb[2 * map.size() + i] = v;
  }
  return rgb;
}

struct Stat {
  double mean = 0.0;
  double stddev = 0.0;
};

json stat_json(const Stat& s, int runs) {
  return json{{"mean_ms", s.mean}, {"stddev_ms", s.stddev}, {"runs", runs}};
}

template <typename F>
Stat time_stage(int runs, F&& fn) {
  fn();  // warmup, excluded
  std::vector<double> ms(static_cast<size_t>(runs));
  for (int i = 0; i < runs; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    ms[static_cast<size_t>(i)] = std::chrono::duration<double, std::milli>(t1 - t0).count();
  }
  Stat s;
  for (double v : ms) s.mean += v;
  s.mean /= runs;
  if (runs > 1) {
    double acc = 0.0;
    for (double v : ms) acc += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(acc / (runs - 1));
  }
  return s;
}

size_t argmax_index(const std::vector<float>& v) {
  return static_cast<size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

std::string require_meta(const std::map<std::string, std::string>& meta,
                         const std::string& key, const std::string& what) {
  auto it = meta.find(key);
  if (it == meta.end())
    throw pickplace::IoError(what + ": checkpoint is missing '" + key + "' metadata");
  return it->second;
}

// ---------------------------------------------------------------------------
// gen-demos
// ---------------------------------------------------------------------------

int run_gen_demos(const RunConfig& rc) {
  scenesim::TaskSpec spec = scenesim::make_task(rc.task);
  harness::gen_dataset(rc.out, spec, rc.n, parse_mode(rc.mode), rc.seed, rc.grid, rc.cameras,
                       rc.jobs);
  write_manifest(rc.out, json{{"command", "gen-demos"},
                              {"task", rc.task},
                              {"n", rc.n},
                              {"mode", normalize_mode(rc.mode)},
                              {"seed", rc.seed},
                              {"grid", rc.grid},
                              {"cameras", rc.cameras},
                              {"out", rc.out},
                              {"jobs", rc.jobs}});
  std::cout << "wrote " << rc.n << " episodes (" << rc.task << ", seeds " << rc.seed << ".."
            << rc.seed + static_cast<uint64_t>(rc.n) - 1 << ") to " << rc.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

void print_train_result(const harness::TrainResult& r) {
  std::cout << "first loss " << r.first_loss << "  final loss " << r.final_loss << "\n";
  if (r.best_val_iter >= 0)
    std::cout << "best validation " << r.best_val_score << " at iteration " << r.best_val_iter
              << " (" << r.best_checkpoint << ")\n";
  std::cout << "final checkpoint " << r.final_checkpoint << "\n";
}

int run_train(const RunConfig& rc) {
  if (rc.se3 && rc.model != "transporter")
    throw UsageError("--se3 applies to the transporter model only");

  json manifest{{"command", "train"},  {"model", rc.model},
                {"dataset", rc.dataset}, {"out", rc.out},
                {"seed", rc.seed},     {"val-episodes", rc.val_episodes},
                {"jobs", rc.jobs}};

  harness::TrainResult result;
  if (rc.model == "gt-state") {
    harness::GtStateConfig gc;
    gc.steps = rc.iterations < 0 ? gc.steps : rc.iterations;
    gc.lr = rc.lr < 0 ? gc.lr : rc.lr;
    gc.eval_every = rc.eval_every < 0 ? gc.eval_every : rc.eval_every;
    gc.val_episodes = rc.val_episodes;
    gc.seed = rc.seed;
    gc.jobs = rc.jobs;
    gc.out_dir = rc.out;
    gc.two_step = rc.two_step;
    gc.mixtures = rc.mixtures;
    gc.batch = rc.batch;
    gc.temperature = rc.temperature;
    manifest["iterations"] = gc.steps;
    manifest["lr"] = gc.lr;
    manifest["eval-every"] = gc.eval_every;
    manifest["two-step"] = gc.two_step;
    manifest["mixtures"] = gc.mixtures;
    manifest["batch"] = gc.batch;
    manifest["temperature"] = gc.temperature;
    result = harness::train_gt_state(gc, rc.dataset);
  } else {
    harness::DatasetMeta meta = harness::load_meta(rc.dataset);
    harness::TrainConfig tc;
    tc.agent.net = rc.net.empty() ? meta.grid : rc.net;
    tc.agent.k = rc.k;
    tc.agent.crop = rc.crop;
    tc.agent.se3 = rc.se3;
    tc.agent.seed = rc.init_seed;
    tc.iterations = rc.iterations < 0 ? tc.iterations : rc.iterations;
    tc.lr = rc.lr < 0 ? tc.lr : rc.lr;
    tc.augment = rc.augment;
    tc.eval_every = rc.eval_every < 0 ? tc.eval_every : rc.eval_every;
    tc.val_episodes = rc.val_episodes;
    tc.seed = rc.seed;
    tc.jobs = rc.jobs;
    tc.out_dir = rc.out;
    manifest["iterations"] = tc.iterations;
    manifest["lr"] = tc.lr;
    manifest["eval-every"] = tc.eval_every;
    manifest["augment"] = tc.augment;
    manifest["net"] = tc.agent.net;
    manifest["k"] = tc.agent.k;
    manifest["crop"] = tc.agent.crop;
    manifest["se3"] = tc.agent.se3;
    manifest["init-seed"] = tc.agent.seed;
    if (rc.model == "transporter")
      result = harness::train_transporter(tc, rc.dataset);
    else if (rc.model == "no-transport")
      result = harness::train_no_transport(tc, rc.dataset);
    else
      result = harness::train_per_pixel_ce(tc, rc.dataset);
  }

  write_manifest(rc.out, manifest);
  print_train_result(result);
  return 0;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct LoadedPolicy {
  harness::PolicyFactory factory;
  std::string kind;
  scenesim::TaskSpec spec;
  std::string grid = "desk";
  std::string cameras = "desk";
  uint64_t base_seed = 0;
  bool has_base_seed = false;
  int n_demos = 0;
};

LoadedPolicy load_policy(const RunConfig& rc) {
  LoadedPolicy lp;
  if (!rc.oracle.empty()) {
    if (rc.task.empty()) throw UsageError("--oracle needs --task");
    lp.kind = "oracle-" + normalize_mode(rc.oracle);
    lp.spec = scenesim::make_task(rc.task);
    lp.grid = rc.grid;
    lp.cameras = rc.cameras;
    lp.factory = harness::oracle_policy_factory(parse_mode(rc.oracle));
    return lp;
  }

  tensorgrad::Checkpoint ckpt = tensorgrad::load_checkpoint(rc.checkpoint);
  const std::string format = require_meta(ckpt.meta, "format", "eval");
  lp.kind = format;
  lp.spec = scenesim::make_task(require_meta(ckpt.meta, "task", "eval"));
  if (auto it = ckpt.meta.find("cameras"); it != ckpt.meta.end()) lp.cameras = it->second;
  if (auto it = ckpt.meta.find("grid"); it != ckpt.meta.end()) lp.grid = it->second;
  if (auto it = ckpt.meta.find("base_seed"); it != ckpt.meta.end()) {
    lp.base_seed = std::stoull(it->second);
    lp.has_base_seed = true;
  }
  if (auto it = ckpt.meta.find("n_demos"); it != ckpt.meta.end())
    lp.n_demos = std::stoi(it->second);

  harness::Policy policy;
  if (format == "transporter-agent-1") {
    auto agent = std::make_shared<transporter::Agent>(transporter::Agent::load(rc.checkpoint));
    lp.grid = agent->config().grid;
    policy = [agent](const recon::Heightmap& hm, const scenesim::Env&) {
      return agent->act(hm);
    };
  } else if (format == "no-transport-1") {
    auto model = std::make_shared<harness::NoTransportModel>(
        harness::NoTransportModel::load(rc.checkpoint));
    lp.grid = model->config().grid;
    policy = [model](const recon::Heightmap& hm, const scenesim::Env&) {
      return model->act(hm);
    };
  } else if (format == "gt-state-1") {
    policy = harness::gt_state_policy(
        std::make_shared<harness::GtStateModel>(harness::GtStateModel::load(rc.checkpoint)));
  } else {
    throw pickplace::IoError("eval: unrecognized checkpoint format '" + format + "'");
  }
  lp.factory = [policy](uint64_t) { return policy; };
  return lp;
}

int run_eval(const RunConfig& rc, bool seed_given) {
  if (rc.checkpoint.empty() && rc.oracle.empty())
    throw UsageError("pass --checkpoint or --oracle");

  LoadedPolicy lp = load_policy(rc);
  uint64_t base = rc.seed;
  if (!seed_given) {
    if (!rc.oracle.empty())
      base = 0;
    else if (lp.has_base_seed)
      base = lp.base_seed;
    else
      throw UsageError("checkpoint carries no base_seed; pass --seed");
  }

  const std::vector<uint64_t> seeds = harness::test_seed_list(base, rc.episodes);
  harness::EvalReport report =
      harness::evaluate_policy(lp.spec, lp.factory, seeds, scenesim::camera_preset(lp.cameras),
                               pickplace::grid_preset(lp.grid), rc.jobs);
  report.n_demos = lp.n_demos;

  // Test seeds live at a fixed offset above the training range, so the two
  // are disjoint by construction; the report still records the actual check.
  const uint64_t train_lo = base, train_hi = base + static_cast<uint64_t>(lp.n_demos);
  bool disjoint = true;
  for (uint64_t s : seeds) disjoint = disjoint && !(s >= train_lo && s < train_hi);

  json j{{"task", report.task},
         {"policy", lp.kind},
         {"n_demos", report.n_demos},
         {"episodes", report.episodes},
         {"mean_score", report.mean_score},
         {"base_seed", base},
         {"train_seeds", json::array({train_lo, train_hi})},
         {"test_seeds", json::array({seeds.front(), seeds.back() + 1})},
         {"seeds_disjoint_from_training", disjoint}};
  auto pose_json = [](const scenesim::Pose3& p) {
    auto [roll, pitch, yaw] = p.R.rpy();
    return json::array({p.t.x, p.t.y, p.t.z, roll, pitch, yaw});
  };
  j["records"] = json::array();
  for (const harness::EpisodeEval& ep : report.records) {
    json r{{"seed", ep.seed},
           {"reward", ep.reward},
           {"success", ep.success},
           {"steps", ep.steps},
           {"actions", json::array()}};
    for (const scenesim::Action& a : ep.actions)
      r["actions"].push_back({{"pick", pose_json(a.pick)}, {"place", pose_json(a.place)}});
    j["records"].push_back(std::move(r));
  }

  fs::create_directories(rc.out);
  {
    std::ofstream os(fs::path(rc.out) / "report.json");
    if (!os) throw pickplace::IoError("cannot write report.json in " + rc.out);
    os << j.dump(2) << "\n";
  }
  {
    std::ofstream os(fs::path(rc.out) / "report.csv");
    if (!os) throw pickplace::IoError("cannot write report.csv in " + rc.out);
    os << "seed,reward,success,steps\n";
    for (const harness::EpisodeEval& ep : report.records)
      os << ep.seed << "," << ep.reward << "," << (ep.success ? 1 : 0) << "," << ep.steps
         << "\n";
  }
  write_manifest(rc.out, json{{"command", "eval"},
                              {"checkpoint", rc.checkpoint},
                              {"oracle", rc.oracle.empty() ? "" : normalize_mode(rc.oracle)},
                              {"task", report.task},
                              {"episodes", rc.episodes},
                              {"seed", base},
                              {"grid", lp.grid},
                              {"cameras", lp.cameras},
                              {"out", rc.out},
                              {"jobs", rc.jobs}});

  std::cout << "task " << report.task << "  policy " << lp.kind << "  episodes "
            << report.episodes << "  mean score " << report.mean_score << "\n"
            << "report in " << rc.out << " (test seeds disjoint from training: "
            << (disjoint ? "yes" : "NO") << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// viz
// ---------------------------------------------------------------------------

int run_viz(const RunConfig& rc) {
  transporter::Agent agent = transporter::Agent::load(rc.checkpoint);
  tensorgrad::Checkpoint ckpt = tensorgrad::load_checkpoint(rc.checkpoint);
  scenesim::TaskSpec spec = scenesim::make_task(require_meta(ckpt.meta, "task", "viz"));
  std::string cameras = rc.cameras;
  if (auto it = ckpt.meta.find("cameras"); it != ckpt.meta.end()) cameras = it->second;

  scenesim::Env env(spec, rc.seed);
  recon::Heightmap hm =
      recon::reconstruct(env.scene().state, scenesim::camera_preset(cameras), agent.grid());
  const int H = hm.rows(), W = hm.cols();
  const size_t plane = static_cast<size_t>(hm.plane());

  tensorgrad::Tensor x = transporter::preprocess<float>(hm);
  tensorgrad::Tensor v_pick = agent.pick().forward(x);
  int pu = 0, pv = 0;
  transporter::argmax_pick(v_pick, pu, pv);
  tensorgrad::Tensor v_place = agent.transport().forward(x, pu, pv);
  int qu = 0, qv = 0, qbin = 0;
  transporter::argmax_place(v_place, qu, qv, qbin);
  const int k = agent.config().k;

  fs::create_directories(rc.out);
  std::vector<float> obs_rgb(hm.data.begin(), hm.data.begin() + 3 * plane);
  harness::save_ppm((fs::path(rc.out) / "obs.ppm").string(), obs_rgb, W, H);
  harness::save_ppm((fs::path(rc.out) / "v_pick.ppm").string(), heat_rgb(v_pick.value()), W, H);

  std::vector<float> place_max(plane, 0.0f);
  const std::vector<float>& pv_data = v_place.value();
  for (int w = 0; w < k; ++w)
    for (size_t i = 0; i < plane; ++i)
      place_max[i] = std::max(place_max[i], pv_data[static_cast<size_t>(w) * plane + i]);
  harness::save_ppm((fs::path(rc.out) / "v_place.ppm").string(), heat_rgb(place_max), W, H);

  {
    // One row per rotation bin, probed at the argmax pixel: bin,angle,value.
    std::ofstream os(fs::path(rc.out) / "rotation_profile.csv");
    if (!os) throw pickplace::IoError("cannot write rotation_profile.csv in " + rc.out);
    for (int w = 0; w < k; ++w) {
      double angle = 2.0 * M_PI * w / k;
      float value = pv_data[(static_cast<size_t>(w) * static_cast<size_t>(H) + qu) * W + qv];
      os << w << "," << angle << "," << value << "\n";
    }
  }
  write_manifest(rc.out, json{{"command", "viz"},
                              {"checkpoint", rc.checkpoint},
                              {"task", scenesim::to_string(spec.id)},
                              {"seed", rc.seed},
                              {"cameras", cameras},
                              {"out", rc.out}});

  std::cout << "pick argmax (" << pu << "," << pv << ")  place argmax (" << qu << "," << qv
            << ") bin " << qbin << "\n"
            << "wrote obs.ppm, v_pick.ppm, v_place.ppm, rotation_profile.csv to " << rc.out
            << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

int run_bench(const RunConfig& rc) {
  std::unique_ptr<transporter::Agent> agent;
  std::string cameras = rc.cameras;
  std::string task = rc.task.empty() ? "block-insertion" : rc.task;
  if (!rc.checkpoint.empty()) {
    agent = std::make_unique<transporter::Agent>(transporter::Agent::load(rc.checkpoint));
    tensorgrad::Checkpoint ckpt = tensorgrad::load_checkpoint(rc.checkpoint);
    if (auto it = ckpt.meta.find("cameras"); it != ckpt.meta.end()) cameras = it->second;
    if (rc.task.empty())
      if (auto it = ckpt.meta.find("task"); it != ckpt.meta.end()) task = it->second;
  } else {
    transporter::AgentConfig acfg;
    acfg.net = rc.net.empty() ? rc.grid : rc.net;
    acfg.grid = rc.grid;
    acfg.k = rc.k;
    acfg.crop = rc.crop;
    acfg.seed = rc.init_seed;
    agent = std::make_unique<transporter::Agent>(acfg);
  }
  const int k = agent->config().k;
  const int runs = rc.runs;

  scenesim::TaskSpec spec = scenesim::make_task(task);
  scenesim::Env env(spec, rc.seed);
  const std::vector<scenesim::CameraSpec> cams = scenesim::camera_preset(cameras);
  const std::vector<scenesim::ViewImage> views = scenesim::render_views(env.scene().state, cams);

  recon::Heightmap hm;
  Stat st_recon = time_stage(runs, [&] {
    std::vector<recon::PointCloud> clouds;
    clouds.reserve(views.size());
    for (size_t c = 0; c < views.size(); ++c) clouds.push_back(recon::unproject(views[c], cams[c]));
    hm = recon::fuse_ortho(clouds, agent->grid());
  });

  tensorgrad::Tensor x = transporter::preprocess<float>(hm);
  tensorgrad::Tensor v_pick;
  Stat st_pick = time_stage(runs, [&] { v_pick = agent->pick().forward(x); });
  int pu = 0, pv = 0;
  transporter::argmax_pick(v_pick, pu, pv);

  tensorgrad::Tensor v_place;
  Stat st_transport = time_stage(runs, [&] { v_place = agent->transport().forward(x, pu, pv); });

  Stat st_decode = time_stage(runs, [&] {
    transporter::GridAction ga;
    transporter::argmax_pick(v_pick, ga.pick_u, ga.pick_v);
    transporter::argmax_place(v_place, ga.place_u, ga.place_v, ga.place_bin);
    scenesim::Action act = transporter::decode_action(ga, hm, k, false);
    (void)act;
  });

  // Direct vs FFT correlation on fresh random inputs at the model's true
  // sizes; the argmax must agree on every one of them.
  const int d = agent->transport().d();
  const int c = agent->transport().crop();
  const int H = hm.rows(), W = hm.cols();
  int agree = 0;
  std::vector<double> t_direct(static_cast<size_t>(runs)), t_fft(static_cast<size_t>(runs));
  for (int i = 0; i < runs; ++i) {
    tensorgrad::Rng rng = tensorgrad::Rng(rc.seed).substream("fft/" + std::to_string(i));
    std::vector<float> key(static_cast<size_t>(d) * H * W);
    std::vector<float> kernels(static_cast<size_t>(k) * d * c * c);
    for (float& v : key) v = static_cast<float>(rng.normal());
    for (float& v : kernels) v = static_cast<float>(rng.normal());
    tensorgrad::Tensor key_t = tensorgrad::Tensor::from_data({d, H, W}, key);
    tensorgrad::Tensor ker_t = tensorgrad::Tensor::from_data({k, d, c, c}, kernels);

    auto t0 = std::chrono::steady_clock::now();
    tensorgrad::Tensor direct =
        tensorgrad::correlate(key_t, ker_t, tensorgrad::PadMode::kZero);
    auto t1 = std::chrono::steady_clock::now();
    std::vector<float> fft = tensorgrad::correlate_fft(key, d, H, W, kernels, k, c);
    auto t2 = std::chrono::steady_clock::now();
    t_direct[static_cast<size_t>(i)] = std::chrono::duration<double, std::milli>(t1 - t0).count();
    t_fft[static_cast<size_t>(i)] = std::chrono::duration<double, std::milli>(t2 - t1).count();
    if (argmax_index(direct.value()) == argmax_index(fft)) ++agree;
  }
  auto stat_of = [runs](const std::vector<double>& ms) {
    Stat s;
    for (double v : ms) s.mean += v;
    s.mean /= runs;
    if (runs > 1) {
      double acc = 0.0;
      for (double v : ms) acc += (v - s.mean) * (v - s.mean);
      s.stddev = std::sqrt(acc / (runs - 1));
    }
    return s;
  };
  Stat st_direct = stat_of(t_direct), st_fft = stat_of(t_fft);

  // Transport again with doubled k: the stack is twice as deep, so the stage
  // should take roughly twice as long.
  transporter::AgentConfig dcfg = agent->config();
  dcfg.k = 2 * k;
  transporter::Agent doubled(dcfg);
  Stat st_transport2 = time_stage(runs, [&] {
    tensorgrad::Tensor v = doubled.transport().forward(x, pu, pv);
    (void)v;
  });
  const double ratio = st_transport.mean > 0.0 ? st_transport2.mean / st_transport.mean : 0.0;

  auto line = [](const std::string& name, const Stat& s, int n) {
    std::printf("%-16s mean %10.3f ms  stddev %9.3f ms  (%d runs)\n", name.c_str(), s.mean,
                s.stddev, n);
  };
  line("reconstruction", st_recon, runs);
  line("pick_forward", st_pick, runs);
  line("transport", st_transport, runs);
  line("decode", st_decode, runs);
  line("correlate_direct", st_direct, runs);
  line("correlate_fft", st_fft, runs);
  std::printf("fft_vs_direct_argmax_agree %d/%d\n", agree, runs);
  std::printf("k_doubling transport k=%d -> k=%d: %.3f ms -> %.3f ms (ratio %.2f)\n", k, 2 * k,
              st_transport.mean, st_transport2.mean, ratio);

  if (!rc.out.empty()) {
    json j{{"stages",
            {{"reconstruction", stat_json(st_recon, runs)},
             {"pick_forward", stat_json(st_pick, runs)},
             {"transport", stat_json(st_transport, runs)},
             {"decode", stat_json(st_decode, runs)}}},
           {"correlate", {{"direct", stat_json(st_direct, runs)}, {"fft", stat_json(st_fft, runs)}}},
           {"fft_vs_direct_argmax_agree", agree},
           {"k", k},
           {"k_doubling", {{"k2", 2 * k}, {"transport_ms", st_transport2.mean}, {"ratio", ratio}}}};
    fs::create_directories(rc.out);
    std::ofstream os(fs::path(rc.out) / "bench.json");
    if (!os) throw pickplace::IoError("cannot write bench.json in " + rc.out);
    os << j.dump(2) << "\n";
    write_manifest(rc.out, json{{"command", "bench"},
                                {"checkpoint", rc.checkpoint},
                                {"task", task},
                                {"seed", rc.seed},
                                {"runs", runs},
                                {"grid", agent->config().grid},
                                {"net", agent->config().net},
                                {"k", k},
                                {"crop", agent->transport().crop()},
                                {"cameras", cameras},
                                {"out", rc.out}});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale pick-and-place: demo generation, training, evaluation,\n"
               "prediction visualization and inference benchmarks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "pickplace 1.0.0");
  app.set_config("--config", "", "read option defaults from a file (flags given explicitly win)");

  RunConfig rc;
  const std::vector<std::string> tasks = task_names();
  const std::vector<std::string> modes = {"det", "deterministic", "stoch", "stochastic"};
  const std::vector<std::string> grids = {"desk", "full", "micro"};
  const std::vector<std::string> models = {"transporter", "no-transport", "per-pixel-ce",
                                           "gt-state"};

  CLI::App* gen = app.add_subcommand("gen-demos", "roll out the scripted oracle into a dataset");
  gen->add_option("--task", rc.task, "task to generate")
      ->required()
      ->check(CLI::IsMember(tasks));
  gen->add_option("--n", rc.n, "number of episodes")->required()->check(CLI::Range(1, 1 << 30));
  gen->add_option("--mode", rc.mode, "oracle mode")->check(CLI::IsMember(modes));
  gen->add_option("--seed", rc.seed, "base seed; episode e uses seed+e");
  gen->add_option("--grid", rc.grid, "workspace grid preset")->check(CLI::IsMember(grids));
  gen->add_option("--cameras", rc.cameras, "camera preset")->check(CLI::IsMember(grids));
  gen->add_option("--out", rc.out, "dataset directory")->required();
  gen->add_option("--jobs", rc.jobs, "worker threads")->check(CLI::Range(1, 1 << 30));

  CLI::App* train = app.add_subcommand("train", "behavior-clone a model on a demo dataset");
  train->add_option("--dataset", rc.dataset, "demo dataset directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  train->add_option("--out", rc.out, "run directory for checkpoints and logs")->required();
  train->add_option("--model", rc.model, "model family")->check(CLI::IsMember(models));
  train->add_option("--iterations", rc.iterations, "training iterations (default: per model)")
      ->check(CLI::Range(1, 1 << 30));
  train->add_option("--lr", rc.lr, "learning rate (default: per model)")
      ->check(CLI::PositiveNumber);
  train->add_option("--seed", rc.seed, "sampling/augmentation seed");
  train->add_option("--init-seed", rc.init_seed, "weight initialization seed");
  train->add_flag("--augment,!--no-augment", rc.augment, "random SE(2) augmentation (image models)");
  train->add_flag("--se3", rc.se3, "enable the roll/pitch/z regression streams (transporter)");
  train->add_option("--k", rc.k, "rotation bins")->check(CLI::Range(1, 1 << 30));
  train->add_option("--crop", rc.crop, "correlation crop side (0 = derive from grid)")
      ->check(CLI::NonNegativeNumber);
  train->add_option("--net", rc.net, "FCN preset (default: follow the dataset grid)")
      ->check(CLI::IsMember(grids));
  train->add_option("--eval-every", rc.eval_every,
                    "validation cadence in iterations; 0 disables (default: per model)")
      ->check(CLI::Range(0, 1 << 30));
  train->add_option("--val-episodes", rc.val_episodes, "episodes per validation pass")
      ->check(CLI::Range(1, 1 << 30));
  train->add_option("--jobs", rc.jobs, "worker threads for validation rollouts")
      ->check(CLI::Range(1, 1 << 30));
  train->add_flag("--two-step", rc.two_step, "cascade pick then place (gt-state)");
  train->add_option("--mixtures", rc.mixtures, "mixture components (gt-state)")
      ->check(CLI::Range(1, 1 << 30));
  train->add_option("--batch", rc.batch, "batch size (gt-state)")->check(CLI::Range(1, 1 << 30));
  train->add_option("--temperature", rc.temperature, "training temperature (gt-state)")
      ->check(CLI::PositiveNumber);

  CLI::App* ev = app.add_subcommand("eval", "roll out a policy on held-out test scenes");
  auto* o_ckpt = ev->add_option("--checkpoint", rc.checkpoint, "trained model checkpoint")
                     ->check(CLI::ExistingFile);
  ev->add_option("--oracle", rc.oracle, "evaluate the scripted oracle instead of a checkpoint")
      ->check(CLI::IsMember(modes))
      ->excludes(o_ckpt);
  ev->add_option("--task", rc.task, "task (oracle runs; checkpoints carry their task)")
      ->check(CLI::IsMember(tasks));
  ev->add_option("--episodes", rc.episodes, "test episodes")->check(CLI::Range(1, 1 << 30));
  auto* o_eseed = ev->add_option(
      "--seed", rc.seed, "base seed (default: the checkpoint's training base seed); test scenes\n"
                         "use the test offset above it, disjoint from the training range");
  ev->add_option("--grid", rc.grid, "grid preset (oracle runs)")->check(CLI::IsMember(grids));
  ev->add_option("--cameras", rc.cameras, "camera preset (oracle runs)")
      ->check(CLI::IsMember(grids));
  ev->add_option("--out", rc.out, "report directory")->required();
  ev->add_option("--jobs", rc.jobs, "worker threads")->check(CLI::Range(1, 1 << 30));

  CLI::App* viz = app.add_subcommand("viz", "render model predictions for one scene");
  viz->add_option("--checkpoint", rc.checkpoint, "transporter checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  viz->add_option("--seed", rc.seed, "scene seed");
  viz->add_option("--cameras", rc.cameras, "camera preset override")->check(CLI::IsMember(grids));
  viz->add_option("--out", rc.out, "output directory")->required();

  CLI::App* bench = app.add_subcommand("bench", "time the inference stages");
  bench->add_option("--checkpoint", rc.checkpoint, "agent checkpoint (default: fresh weights)")
      ->check(CLI::ExistingFile);
  bench->add_option("--task", rc.task, "benchmark scene task")->check(CLI::IsMember(tasks));
  bench->add_option("--seed", rc.seed, "scene seed");
  bench->add_option("--runs", rc.runs, "timed repetitions per stage")
      ->check(CLI::Range(1, 1 << 30));
  bench->add_option("--grid", rc.grid, "grid preset (fresh agents)")->check(CLI::IsMember(grids));
  bench->add_option("--net", rc.net, "FCN preset (fresh agents; default: follow the grid)")
      ->check(CLI::IsMember(grids));
  bench->add_option("--k", rc.k, "rotation bins (fresh agents)")->check(CLI::Range(1, 1 << 30));
  bench->add_option("--crop", rc.crop, "correlation crop side (fresh agents)")
      ->check(CLI::NonNegativeNumber);
  bench->add_option("--init-seed", rc.init_seed, "weight seed (fresh agents)");
  bench->add_option("--cameras", rc.cameras, "camera preset")->check(CLI::IsMember(grids));
  bench->add_option("--out", rc.out, "directory for bench.json (default: stdout only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (gen->parsed()) return run_gen_demos(rc);
    if (train->parsed()) return run_train(rc);
    if (ev->parsed()) return run_eval(rc, o_eseed->count() > 0);
    if (viz->parsed()) return run_viz(rc);
    if (bench->parsed()) return run_bench(rc);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
