#include "pickplace/transporter/se3_model.hpp"

#include <algorithm>

#include "pickplace/errors.hpp"
#include "pickplace/transporter/obs.hpp"

namespace transporter {

using namespace tensorgrad;

namespace {
FcnConfig stream_cfg(FcnConfig cfg) {
  cfg.in_channels = kObsChannels;
  cfg.out_channels = Se3ModelT<float>::kGroups * Se3ModelT<float>::kGroupChannels;
  cfg.final_relu = false;
  return cfg;
}
}  // namespace

template <typename T>
Se3ModelT<T>::Se3ModelT(FcnConfig cfg, int k, int crop, Rng rng)
    : psi_(stream_cfg(cfg), rng.substream("se3_psi"), "se3_psi"),
      phi_(stream_cfg(cfg), rng.substream("se3_phi"), "se3_phi"),
      k_(k),
      crop_(crop) {
  if (k < 1) throw pickplace::ContractError("Se3Model: k must be >= 1");
  if (crop < 1 || crop % 2 == 0)
    throw pickplace::ContractError("Se3Model: crop must be odd and positive");
  params_ = psi_.params();
  params_.insert(params_.end(), phi_.params().begin(), phi_.params().end());
  Rng mrng = rng.substream("se3_mlp");
  for (int g = 0; g < kGroups; ++g) {
    std::string base = "se3_mlp" + std::to_string(g);
    mlps_[g][0] = he_normal<T>({kMlpWidth, 1}, 1, mrng, base + "/l1/w");
    mlps_[g][1] = TensorT<T>::param({kMlpWidth}, std::vector<T>(kMlpWidth, T(0)), base + "/l1/b");
    mlps_[g][2] = he_normal<T>({kMlpWidth, kMlpWidth}, kMlpWidth, mrng, base + "/l2/w");
    mlps_[g][3] = TensorT<T>::param({kMlpWidth}, std::vector<T>(kMlpWidth, T(0)), base + "/l2/b");
    mlps_[g][4] = he_normal<T>({1, kMlpWidth}, kMlpWidth, mrng, base + "/l3/w");
    mlps_[g][5] = TensorT<T>::param({1}, std::vector<T>(1, T(0)), base + "/l3/b");
    for (auto& p : mlps_[g]) params_.push_back(p);
  }
}

template <typename T>
std::array<TensorT<T>, Se3ModelT<T>::kGroups> Se3ModelT<T>::correlations(
    const TensorT<T>& obs, int pick_u, int pick_v) const {
  if (obs.ndim() != 3 || obs.dim(0) != kObsChannels)
    throw pickplace::DimensionError("Se3Model: expected [4,H,W] observation, got " +
                                    shape_str(obs.shape()));
  TensorT<T> stack = rotation_stack(obs, k_, pick_u, pick_v);
  TensorT<T> feats = psi_.forward(stack);                         // [k,24,H,W]
  TensorT<T> kernels = crop_stack(feats, pick_u, pick_v, crop_);  // [k,24,c,c]
  TensorT<T> key = phi_.forward(obs);                             // [24,H,W]
  const T scale = T(1) / static_cast<T>(crop_ * crop_ * kGroupChannels);
  std::array<TensorT<T>, kGroups> maps;
  for (int g = 0; g < kGroups; ++g) {
    TensorT<T> kern_g = channel_slice(kernels, g * kGroupChannels, (g + 1) * kGroupChannels);
    TensorT<T> key_g = channel_slice(key, g * kGroupChannels, (g + 1) * kGroupChannels);
    maps[g] = affine(correlate(key_g, kern_g, psi_.config().pad), scale, T(0));
  }
  return maps;
}

template <typename T>
TensorT<T> Se3ModelT<T>::head(int g, const TensorT<T>& scalars) const {
  if (g < 0 || g >= kGroups) throw pickplace::IndexError("Se3Model: bad head index");
  TensorT<T> x = relu(linear(scalars, mlps_[g][0], mlps_[g][1]));
  x = relu(linear(x, mlps_[g][2], mlps_[g][3]));
  return linear(x, mlps_[g][4], mlps_[g][5]);
}

template <typename T>
std::vector<int64_t> Se3ModelT<T>::window_indices(int rows, int cols, int u, int v,
                                                  int bin) const {
  const int half = kWindow / 2;
  const int u0 = std::max(0, u - half), u1 = std::min(rows - 1, u + half);
  const int v0 = std::max(0, v - half), v1 = std::min(cols - 1, v + half);
  std::vector<int> bins{((bin - 1) % k_ + k_) % k_, bin % k_, (bin + 1) % k_};
  std::sort(bins.begin(), bins.end());
  bins.erase(std::unique(bins.begin(), bins.end()), bins.end());
  std::vector<int64_t> idx;
  idx.reserve(bins.size() * (u1 - u0 + 1) * (v1 - v0 + 1));
  for (int w : bins)
    for (int uu = u0; uu <= u1; ++uu)
      for (int vv = v0; vv <= v1; ++vv)
        idx.push_back((static_cast<int64_t>(w) * rows + uu) * cols + vv);
  return idx;
}

template <typename T>
std::array<double, Se3ModelT<T>::kGroups> Se3ModelT<T>::predict(
    const std::array<TensorT<T>, kGroups>& maps, int64_t flat) const {
  std::array<double, kGroups> out;
  for (int g = 0; g < kGroups; ++g) {
    TensorT<T> s = gather_flat(maps[g], {flat});
    out[g] = static_cast<double>(head(g, s).item());
  }
  return out;
}

template class Se3ModelT<float>;
template class Se3ModelT<double>;

}  // namespace transporter
