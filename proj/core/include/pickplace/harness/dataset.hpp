#pragma once

#include <string>
#include <vector>

#include "pickplace/recon/fuse.hpp"
#include "pickplace/scenesim/sim.hpp"

namespace harness {

// One observation-action pair. The scene snapshot is what the ground-truth
// state baseline consumes; views are only populated when explicitly requested
// (training needs just the fused heightmap).
struct StepRecord {
  scenesim::SceneState scene;
  recon::Heightmap obs;
  std::vector<scenesim::ViewImage> views;
  scenesim::Action action;
  double reward = 0.0;
};

struct EpisodeRecord {
  std::string task;
  uint64_t seed = 0;
  std::vector<StepRecord> steps;

  double total_reward() const;
};

struct DatasetMeta {
  std::string task;
  std::string grid;     // grid preset name
  std::string cameras;  // camera preset name
  std::string mode;     // "det" | "stoch"
  uint64_t base_seed = 0;
  int n_episodes = 0;
};

// Seed discipline: training, validation and test scenes come from disjoint
// ranges of the same base seed, so overlap is impossible by construction.
inline uint64_t train_seed(uint64_t base, int e) { return base + static_cast<uint64_t>(e); }
inline uint64_t val_seed(uint64_t base, int e) { return base + 10000 + static_cast<uint64_t>(e); }
inline uint64_t test_seed(uint64_t base, int e) { return base + 20000 + static_cast<uint64_t>(e); }

// Roll out the scripted oracle for n episodes and store them under root.
// Every episode must finish at reward 1.0; anything less aborts with a
// diagnostic rather than silently storing a flawed demonstration. Episodes
// are independent, so jobs > 1 generates them on a thread pool; the files
// written are byte-identical regardless of the worker count.
void gen_dataset(const std::string& root, const scenesim::TaskSpec& spec, int n,
                 scenesim::OracleMode mode, uint64_t base_seed,
                 const std::string& grid_preset, const std::string& camera_preset,
                 int jobs = 1);

DatasetMeta load_meta(const std::string& root);
EpisodeRecord load_episode(const std::string& root, const DatasetMeta& meta, int index,
                           bool with_views = false);

// Re-execute a stored episode's actions from its seed; returns the final
// episode metric (1.0 when the format and simulator agree).
double replay_episode(const scenesim::TaskSpec& spec, const EpisodeRecord& ep);

// Image file helpers (also used by the viz tool). PPM is binary P6 at
// maxval 255; depth files are a short text header plus raw little-endian
// float32 meters.
void save_ppm(const std::string& path, const std::vector<float>& rgb, int width, int height);
std::vector<float> load_ppm(const std::string& path, int& width, int& height);
void save_depth(const std::string& path, const std::vector<float>& depth, int width,
                int height);
std::vector<float> load_depth(const std::string& path, int& width, int& height);

}  // namespace harness
