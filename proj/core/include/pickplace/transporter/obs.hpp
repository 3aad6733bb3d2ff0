#pragma once

#include "pickplace/recon/heightmap.hpp"
#include "pickplace/tensorgrad/tensor.hpp"

namespace transporter {

inline constexpr int kObsChannels = 4;

// Network input from a heightmap: planar [4,H,W] with RGB shifted to
// [-0.5, 0.5] and height scaled by 10 then shifted, so every channel is
// roughly zero-centered at comparable magnitude.
template <typename T>
tensorgrad::TensorT<T> preprocess(const recon::Heightmap& hm);

// Correlation crop side: the smallest odd pixel count >= ceil(0.4*min(H,W)),
// large enough to cover every graspable object at any preset resolution.
int default_crop(int rows, int cols);

}  // namespace transporter
