#include "pickplace/tensorgrad/fcn.hpp"

#include "pickplace/errors.hpp"

namespace tensorgrad {

using pickplace::ContractError;
using pickplace::DimensionError;

FcnConfig fcn_micro(int in_channels, int out_channels) {
  FcnConfig c;
  c.in_channels = in_channels;
  c.out_channels = out_channels;
  c.c1 = 8;
  c.c2 = 12;
  c.c3 = 16;
  c.blocks = {0, 0, 2, 0, 0};
  return c;
}

FcnConfig fcn_desk(int in_channels, int out_channels) {
  FcnConfig c;
  c.in_channels = in_channels;
  c.out_channels = out_channels;
  c.c1 = 16;
  c.c2 = 32;
  c.c3 = 64;
  c.blocks = {1, 1, 2, 1, 1};
  return c;
}

FcnConfig fcn_full(int in_channels, int out_channels) {
  FcnConfig c;
  c.in_channels = in_channels;
  c.out_channels = out_channels;
  c.c1 = 32;
  c.c2 = 64;
  c.c3 = 96;
  c.blocks = {2, 2, 4, 2, 2};
  return c;
}

FcnConfig fcn_preset(const std::string& name, int in_channels, int out_channels) {
  if (name == "micro") return fcn_micro(in_channels, out_channels);
  if (name == "desk") return fcn_desk(in_channels, out_channels);
  if (name == "full") return fcn_full(in_channels, out_channels);
  throw ContractError("fcn_preset: unknown preset '" + name + "'");
}

template <typename T>
typename HourglassFCNT<T>::Conv HourglassFCNT<T>::make_conv(int cin, int cout, int ksize,
                                                            int stride, int dilation, Rng& rng,
                                                            const std::string& name) {
  Conv c;
  c.w = he_normal<T>({cout, cin, ksize, ksize}, cin * ksize * ksize, rng, name + "/w");
  c.b = TensorT<T>::param({cout}, std::vector<T>(cout, T(0)), name + "/b");
  c.spec.stride = stride;
  c.spec.dilation = dilation;
  c.spec.pad = cfg_.pad;
  params_.push_back(c.w);
  params_.push_back(c.b);
  return c;
}

template <typename T>
HourglassFCNT<T>::HourglassFCNT(const FcnConfig& cfg, Rng rng, const std::string& prefix)
    : cfg_(cfg) {
  if (cfg.c1 < 1 || cfg.c2 < 1 || cfg.c3 < 1 || cfg.in_channels < 1 || cfg.out_channels < 1)
    throw ContractError("fcn: channel counts must be positive");
  const int dil = cfg.dilation;
  stem_ = make_conv(cfg.in_channels, cfg.c1, 3, 1, 1, rng, prefix + "/stem");

  const int enc_in[3] = {cfg.c1, cfg.c1, cfg.c2};
  const int enc_out[3] = {cfg.c1, cfg.c2, cfg.c3};
  for (int s = 0; s < 3; ++s) {
    downs_.push_back(make_conv(enc_in[s], enc_out[s], 3, 2, dil, rng,
                               prefix + "/enc" + std::to_string(s) + "/down"));
    std::vector<Conv> blocks;
    for (int b = 0; b < cfg.blocks[s]; ++b) {
      std::string base = prefix + "/enc" + std::to_string(s) + "/res" + std::to_string(b);
      blocks.push_back(make_conv(enc_out[s], enc_out[s], 3, 1, dil, rng, base + "/a"));
      blocks.push_back(make_conv(enc_out[s], enc_out[s], 3, 1, dil, rng, base + "/b"));
    }
    enc_res_.push_back(std::move(blocks));
  }

  const int dec_in[3] = {cfg.c3, cfg.c2, cfg.c1};
  const int dec_out[3] = {cfg.c2, cfg.c1, cfg.c1};
  for (int s = 0; s < 3; ++s) {
    ups_.push_back(make_conv(dec_in[s], dec_out[s], 3, 1, dil, rng,
                             prefix + "/dec" + std::to_string(s) + "/conv"));
    if (s < 2) {
      std::vector<Conv> blocks;
      for (int b = 0; b < cfg.blocks[3 + s]; ++b) {
        std::string base = prefix + "/dec" + std::to_string(s) + "/res" + std::to_string(b);
        blocks.push_back(make_conv(dec_out[s], dec_out[s], 3, 1, dil, rng, base + "/a"));
        blocks.push_back(make_conv(dec_out[s], dec_out[s], 3, 1, dil, rng, base + "/b"));
      }
      dec_res_.push_back(std::move(blocks));
    }
  }
  head_ = make_conv(cfg.c1, cfg.out_channels, 3, 1, dil, rng, prefix + "/head");
}

template <typename T>
TensorT<T> HourglassFCNT<T>::forward(const TensorT<T>& x) const {
  const int hdim = x.ndim() == 4 ? 2 : 1;
  if (x.ndim() != 3 && x.ndim() != 4)
    throw DimensionError("fcn: input must be [C,H,W] or [N,C,H,W]");
  if (x.dim(hdim) % 8 != 0 || x.dim(hdim + 1) % 8 != 0)
    throw DimensionError("fcn: H and W must be divisible by 8, got " + shape_str(x.shape()));
  const int cdim = hdim - 1;
  if (x.dim(cdim) != cfg_.in_channels)
    throw DimensionError("fcn: expected " + std::to_string(cfg_.in_channels) + " channels, got " +
                         std::to_string(x.dim(cdim)));

  auto res_chain = [&](TensorT<T> t, const std::vector<Conv>& blocks) {
    for (size_t i = 0; i < blocks.size(); i += 2) {
      auto y = relu(conv2d(t, blocks[i].w, blocks[i].b, blocks[i].spec));
      y = conv2d(y, blocks[i + 1].w, blocks[i + 1].b, blocks[i + 1].spec);
      t = relu(add(t, y));
    }
    return t;
  };

  auto t = relu(conv2d(x, stem_.w, stem_.b, stem_.spec));
  for (int s = 0; s < 3; ++s) {
    t = relu(conv2d(t, downs_[s].w, downs_[s].b, downs_[s].spec));
    t = res_chain(t, enc_res_[s]);
  }
  for (int s = 0; s < 3; ++s) {
    t = upsample2x(t, cfg_.pad);
    t = relu(conv2d(t, ups_[s].w, ups_[s].b, ups_[s].spec));
    if (s < 2) t = res_chain(t, dec_res_[s]);
  }
  t = conv2d(t, head_.w, head_.b, head_.spec);
  if (cfg_.final_relu) t = relu(t);
  return t;
}

template class HourglassFCNT<float>;
template class HourglassFCNT<double>;

}  // namespace tensorgrad
