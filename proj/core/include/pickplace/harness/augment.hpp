#pragma once

#include "pickplace/recon/heightmap.hpp"
#include "pickplace/scenesim/task.hpp"
#include "pickplace/tensorgrad/rng.hpp"

namespace harness {

struct AugmentedSample {
  recon::Heightmap obs;
  scenesim::Action action;
  scenesim::Pose3 transform;  // the world-frame SE(2) map that was applied
  bool identity = false;      // true when no in-bounds transform was found
};

// Random SE(2) world-frame transform of an observation-action pair: the
// heightmap is warped as if the whole scene had been rigidly moved, and the
// action poses are composed with the same map. The transform is resampled
// (up to 100 draws) until both the pick and the place point stay inside the
// workspace; if that never happens the identity is returned.
AugmentedSample augment_se2(const recon::Heightmap& obs, const scenesim::Action& action,
                            tensorgrad::Rng& rng);

// The deterministic core of augment_se2, exposed for property tests.
recon::Heightmap warp_heightmap(const recon::Heightmap& obs, const scenesim::Pose3& g);

}  // namespace harness
