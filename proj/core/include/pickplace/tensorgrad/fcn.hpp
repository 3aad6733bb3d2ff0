#pragma once

#include <array>
#include <string>
#include <vector>

#include "pickplace/tensorgrad/ops.hpp"
#include "pickplace/tensorgrad/rng.hpp"
#include "pickplace/tensorgrad/tensor.hpp"

namespace tensorgrad {

// Hourglass fully convolutional net: a 3x3 stem, three stride-2 encoder
// stages and three bilinear-upsample decoder stages (total stride 8 at the
// bottleneck), with residual blocks distributed over the five intermediate
// stages. Every convolution after the stem is dilated. The output head has
// no nonlinearity unless final_relu is set. Input H and W must be divisible
// by 8.
struct FcnConfig {
  int in_channels = 4;
  int out_channels = 1;
  int c1 = 16, c2 = 32, c3 = 64;  // channels at stride 1-2, 4, 8
  // Residual block counts: enc@c1, enc@c2, enc@c3, dec@c2, dec@c1.
  std::array<int, 5> blocks = {1, 1, 2, 1, 1};
  PadMode pad = PadMode::kZero;
  bool final_relu = false;
  int dilation = 2;  // applied to all convolutions after the stem
};

// Presets. micro keeps unit tests fast; desk is the training default for the
// 80x160 desk grid; full is the large variant for the fine grid.
FcnConfig fcn_micro(int in_channels, int out_channels);
FcnConfig fcn_desk(int in_channels, int out_channels);
FcnConfig fcn_full(int in_channels, int out_channels);
FcnConfig fcn_preset(const std::string& name, int in_channels, int out_channels);

template <typename T>
class HourglassFCNT {
public:
  // Parameters are He-normal initialized (biases zero) from rng; names are
  // "<prefix>/<layer>/w|b" in creation order.
  HourglassFCNT(const FcnConfig& cfg, Rng rng, const std::string& prefix);

  // x: [C,H,W] -> [out,H,W] or [N,C,H,W] -> [N,out,H,W].
  TensorT<T> forward(const TensorT<T>& x) const;

  const std::vector<TensorT<T>>& params() const { return params_; }
  const FcnConfig& config() const { return cfg_; }

private:
  struct Conv {
    TensorT<T> w, b;
    ConvSpec spec;
  };
  Conv make_conv(int cin, int cout, int ksize, int stride, int dilation, Rng& rng,
                 const std::string& name);

  FcnConfig cfg_;
  Conv stem_;
  std::vector<Conv> downs_;                 // 3 stride-2 convs
  std::vector<std::vector<Conv>> enc_res_;  // per encoder stage
  std::vector<Conv> ups_;                   // 3 post-upsample convs
  std::vector<std::vector<Conv>> dec_res_;  // per decoder stage (first two)
  Conv head_;
  std::vector<TensorT<T>> params_;
};

using HourglassFCN = HourglassFCNT<float>;

extern template class HourglassFCNT<float>;
extern template class HourglassFCNT<double>;

}  // namespace tensorgrad
