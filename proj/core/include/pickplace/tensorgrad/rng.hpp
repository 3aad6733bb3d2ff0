#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace tensorgrad {

// Deterministic random stream. All sampling in the project goes through this
// class; std::*_distribution is never used because its output is
// implementation defined. The generator is mt19937_64 and the uniform /
// normal transforms below are fixed arithmetic, so a seed reproduces the
// same sequence on every platform.
class Rng {
public:
  explicit Rng(uint64_t seed) : gen_(seed), seed_(seed) {}

  uint64_t seed() const { return seed_; }

  uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1): 53-bit mantissa trick.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). n must be > 0.
  uint64_t uniform_index(uint64_t n);

  // Standard normal via Box-Muller. One value per call; the spare is cached.
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Derive an independent generator for a named purpose. The substream seed
  // mixes the root seed with a hash of the name, so adding a consumer never
  // perturbs existing streams.
  Rng substream(const std::string& name) const;

  // Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform_index(i));
      std::swap(v[i - 1], v[j]);
    }
  }

private:
  std::mt19937_64 gen_;
  uint64_t seed_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace tensorgrad
