#include "pickplace/harness/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "pickplace/errors.hpp"
#include "pickplace/scenesim/camera.hpp"

namespace harness {

namespace fs = std::filesystem;
using pickplace::IoError;
using scenesim::Pose3;

namespace {

std::string ep_dir(const std::string& root, int e) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "/episodes/ep_%06d", e);
  return root + buf;
}

std::string step_dir(const std::string& root, int e, int s) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "/step_%03d", s);
  return ep_dir(root, e) + buf;
}

void write_pose(std::FILE* f, const char* tag, const Pose3& p) {
  auto [roll, pitch, yaw] = p.R.rpy();
  std::fprintf(f, "%s %.6f %.6f %.6f %.6f %.6f %.6f\n", tag, p.t.x, p.t.y, p.t.z, roll,
               pitch, yaw);
}

Pose3 read_pose(std::istream& is, const std::string& want) {
  std::string tag;
  double x, y, z, roll, pitch, yaw;
  is >> tag >> x >> y >> z >> roll >> pitch >> yaw;
  if (!is || tag != want) throw IoError("action record: expected '" + want + "' line");
  return Pose3::from_rpy({x, y, z}, roll, pitch, yaw);
}

void save_action(const std::string& path, const scenesim::Action& a, double reward) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw IoError("cannot write " + path);
  write_pose(f, "pick", a.pick);
  write_pose(f, "place", a.place);
  std::fprintf(f, "reward %.6f\n", reward);
  std::fclose(f);
}

void load_action(const std::string& path, scenesim::Action& a, double& reward) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read " + path);
  a.pick = read_pose(is, "pick");
  a.place = read_pose(is, "place");
  std::string tag;
  is >> tag >> reward;
  if (!is || tag != "reward") throw IoError("action record: expected 'reward' line");
}

}  // namespace

double EpisodeRecord::total_reward() const {
  double r = 0;
  for (const auto& s : steps) r += s.reward;
  return r;
}

void save_ppm(const std::string& path, const std::vector<float>& rgb, int width,
              int height) {
  const size_t n = static_cast<size_t>(width) * height;
  if (rgb.size() != 3 * n) throw pickplace::DimensionError("save_ppm: bad buffer size");
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write " + path);
  os << "P6\n" << width << " " << height << "\n255\n";
  std::vector<unsigned char> row(static_cast<size_t>(width) * 3);
  for (int i = 0; i < height; ++i) {
    for (int j = 0; j < width; ++j) {
      for (int c = 0; c < 3; ++c) {
        float v = rgb[c * n + static_cast<size_t>(i) * width + j];
        v = std::min(1.0f, std::max(0.0f, v));
        row[static_cast<size_t>(j) * 3 + c] =
            static_cast<unsigned char>(std::lround(v * 255.0f));
      }
    }
    os.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  if (!os) throw IoError("write failed: " + path);
}

std::vector<float> load_ppm(const std::string& path, int& width, int& height) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot read " + path);
  std::string magic;
  int maxval = 0;
  is >> magic >> width >> height >> maxval;
  if (!is || magic != "P6" || maxval != 255 || width <= 0 || height <= 0)
    throw IoError("bad ppm header: " + path);
  is.get();  // single whitespace before payload
  const size_t n = static_cast<size_t>(width) * height;
  std::vector<unsigned char> raw(3 * n);
  is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!is) throw IoError("truncated ppm: " + path);
  std::vector<float> rgb(3 * n);
  for (size_t i = 0; i < n; ++i)
    for (int c = 0; c < 3; ++c)
      rgb[c * n + i] = static_cast<float>(raw[i * 3 + c]) / 255.0f;
  return rgb;
}

void save_depth(const std::string& path, const std::vector<float>& depth, int width,
                int height) {
  if (depth.size() != static_cast<size_t>(width) * height)
    throw pickplace::DimensionError("save_depth: bad buffer size");
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write " + path);
  os << "depth 1\n" << width << " " << height << "\n";
  os.write(reinterpret_cast<const char*>(depth.data()),
           static_cast<std::streamsize>(depth.size() * 4));
  if (!os) throw IoError("write failed: " + path);
}

std::vector<float> load_depth(const std::string& path, int& width, int& height) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot read " + path);
  std::string tag;
  int version = 0;
  is >> tag >> version >> width >> height;
  if (!is || tag != "depth" || version != 1 || width <= 0 || height <= 0)
    throw IoError("bad depth header: " + path);
  is.get();
  std::vector<float> depth(static_cast<size_t>(width) * height);
  is.read(reinterpret_cast<char*>(depth.data()),
          static_cast<std::streamsize>(depth.size() * 4));
  if (!is) throw IoError("truncated depth file: " + path);
  return depth;
}

namespace {

void write_episode(const std::string& root, const scenesim::TaskSpec& spec, int e,
                   scenesim::OracleMode mode, uint64_t seed,
                   const std::vector<scenesim::CameraSpec>& cams,
                   const pickplace::GridSpec& grid) {
  scenesim::Env env(spec, seed);
  tensorgrad::Rng orng = tensorgrad::Rng(seed).substream("oracle");
  int s = 0;
  while (!env.done()) {
    const std::string sd = step_dir(root, e, s);
    fs::create_directories(sd);
    scenesim::save_scene_file(sd + "/scene.txt", env.scene().state);

    std::vector<recon::PointCloud> clouds;
    for (size_t c = 0; c < cams.size(); ++c) {
      scenesim::ViewImage view = scenesim::render_view(env.scene().state, cams[c]);
      save_ppm(sd + "/view_" + std::to_string(c) + ".ppm", view.rgb, view.width,
               view.height);
      save_depth(sd + "/view_" + std::to_string(c) + ".depth", view.depth, view.width,
                 view.height);
      clouds.push_back(recon::unproject(view, cams[c]));
    }
    recon::Heightmap hm = recon::fuse_ortho(clouds, grid);
    recon::save_heightmap(sd + "/heightmap.hm", hm);

    scenesim::Action act = env.oracle_action(mode, orng);
    scenesim::StepResult res = env.step(act);
    save_action(sd + "/action.txt", act, res.reward);
    ++s;
  }
  if (env.metric() < 1.0 - 1e-9)
    throw pickplace::ContractError(
        "gen_dataset: oracle failed to solve episode " + std::to_string(e) + " (task " +
        scenesim::to_string(spec.id) + ", seed " + std::to_string(seed) + ", reward " +
        std::to_string(env.metric()) + ")");
}

}  // namespace

void gen_dataset(const std::string& root, const scenesim::TaskSpec& spec, int n,
                 scenesim::OracleMode mode, uint64_t base_seed,
                 const std::string& grid_preset, const std::string& camera_preset,
                 int jobs) {
  if (n < 1) throw pickplace::ContractError("gen_dataset: n must be >= 1");
  fs::create_directories(root + "/episodes");
  const auto cams = scenesim::camera_preset(camera_preset);
  const auto grid = pickplace::grid_preset(grid_preset);

  nlohmann::json meta;
  meta["format"] = "pickplace-dataset-1";
  meta["task"] = scenesim::to_string(spec.id);
  meta["grid"] = grid_preset;
  meta["cameras"] = camera_preset;
  meta["mode"] = mode == scenesim::OracleMode::kDeterministic ? "det" : "stoch";
  meta["base_seed"] = base_seed;
  meta["n_episodes"] = n;
  {
    std::ofstream os(root + "/meta.json");
    if (!os) throw IoError("cannot write " + root + "/meta.json");
    os << meta.dump(2) << "\n";
  }

  const int workers = std::max(1, std::min(jobs, n));
  if (workers == 1) {
    for (int e = 0; e < n; ++e)
      write_episode(root, spec, e, mode, train_seed(base_seed, e), cams, grid);
    return;
  }

  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr error;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int e = next.fetch_add(1);
        if (e >= n) return;
        try {
          write_episode(root, spec, e, mode, train_seed(base_seed, e), cams, grid);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

DatasetMeta load_meta(const std::string& root) {
  std::ifstream is(root + "/meta.json");
  if (!is) throw IoError("cannot read " + root + "/meta.json");
  nlohmann::json j = nlohmann::json::parse(is, nullptr, false);
  if (j.is_discarded() || j.value("format", "") != "pickplace-dataset-1")
    throw IoError("not a dataset: " + root);
  DatasetMeta m;
  m.task = j.at("task").get<std::string>();
  m.grid = j.at("grid").get<std::string>();
  m.cameras = j.at("cameras").get<std::string>();
  m.mode = j.at("mode").get<std::string>();
  m.base_seed = j.at("base_seed").get<uint64_t>();
  m.n_episodes = j.at("n_episodes").get<int>();
  return m;
}

EpisodeRecord load_episode(const std::string& root, const DatasetMeta& meta, int index,
                           bool with_views) {
  if (index < 0 || index >= meta.n_episodes)
    throw pickplace::IndexError("load_episode: index out of range");
  EpisodeRecord ep;
  ep.task = meta.task;
  ep.seed = train_seed(meta.base_seed, index);
  for (int s = 0;; ++s) {
    const std::string sd = step_dir(root, index, s);
    if (!fs::exists(sd)) break;
    StepRecord st;
    st.scene = scenesim::load_scene_file(sd + "/scene.txt");
    st.obs = recon::load_heightmap(sd + "/heightmap.hm");
    load_action(sd + "/action.txt", st.action, st.reward);
    if (with_views) {
      for (int c = 0;; ++c) {
        const std::string base = sd + "/view_" + std::to_string(c);
        if (!fs::exists(base + ".ppm")) break;
        scenesim::ViewImage v;
        v.rgb = load_ppm(base + ".ppm", v.width, v.height);
        int dw = 0, dh = 0;
        v.depth = load_depth(base + ".depth", dw, dh);
        if (dw != v.width || dh != v.height)
          throw IoError("view color/depth size mismatch in " + sd);
        st.views.push_back(std::move(v));
      }
    }
    ep.steps.push_back(std::move(st));
  }
  if (ep.steps.empty()) throw IoError("load_episode: no steps under " + ep_dir(root, index));
  return ep;
}

double replay_episode(const scenesim::TaskSpec& spec, const EpisodeRecord& ep) {
  scenesim::Env env(spec, ep.seed);
  for (const auto& st : ep.steps) env.step(st.action);
  return env.metric();
}

}  // namespace harness
