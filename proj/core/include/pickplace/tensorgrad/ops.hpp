#pragma once

#include <cstdint>
#include <vector>

#include "pickplace/tensorgrad/rng.hpp"
#include "pickplace/tensorgrad/tensor.hpp"

namespace tensorgrad {

// ---------------------------------------------------------------------------
// Elementwise and reduction ops. All are differentiable unless noted.
// ---------------------------------------------------------------------------

template <typename T>
TensorT<T> add(const TensorT<T>& a, const TensorT<T>& b);  // same shape
template <typename T>
TensorT<T> sub(const TensorT<T>& a, const TensorT<T>& b);
template <typename T>
TensorT<T> mul(const TensorT<T>& a, const TensorT<T>& b);
// s * x + b, elementwise with scalar coefficients.
template <typename T>
TensorT<T> affine(const TensorT<T>& x, T s, T b);
template <typename T>
TensorT<T> relu(const TensorT<T>& x);
template <typename T>
TensorT<T> sum(const TensorT<T>& x);  // -> scalar [1]
template <typename T>
TensorT<T> mean(const TensorT<T>& x);  // -> scalar [1]

// Elementwise Huber (smooth L1): 0.5 e^2 for |e| <= delta else
// delta*(|e| - 0.5*delta), e = pred - target. Shape preserved.
template <typename T>
TensorT<T> huber(const TensorT<T>& pred, const TensorT<T>& target, T delta);

// Same elements, new shape (numel must match). Differentiable.
template <typename T>
TensorT<T> reshape(const TensorT<T>& x, const Shape& shape);

// Inverted dropout: training-time mask with keep probability 1-p, kept
// activations scaled by 1/(1-p). Mask is drawn from rng at call time.
template <typename T>
TensorT<T> dropout(const TensorT<T>& x, double p, Rng& rng);

// ---------------------------------------------------------------------------
// Softmax / losses.
// ---------------------------------------------------------------------------

// Softmax over every element of the tensor jointly (the success-probability
// map over an image, or over an image stack including the rotation axis).
// Numerically stabilized by max subtraction. Shape preserved; output sums
// to 1 over the whole tensor.
template <typename T>
TensorT<T> image_softmax(const TensorT<T>& x);

// -log(probs[index]) against a one-hot label at the given flat (row-major)
// index. probs is expected to already be a distribution (see image_softmax).
template <typename T>
TensorT<T> cross_entropy_onehot(const TensorT<T>& probs, int64_t index);

// The fused composition cross_entropy_onehot(image_softmax(x), index):
// logsumexp(x) - x[index], gradient softmax(x) - onehot. Unlike the two-op
// route it stays finite for any logit spread, so training uses this form;
// the probabilities themselves can underflow to exact zero in float.
template <typename T>
TensorT<T> softmax_nll(const TensorT<T>& x, int64_t index);

// Mean sigmoid cross-entropy per logit against constant {0,1} targets, in
// the stable softplus form max(x,0) - x*y + log(1+exp(-|x|)). Fused op with
// the analytic gradient (sigmoid(x) - y) / n. Returns a scalar [1].
template <typename T>
TensorT<T> bce_logits(const TensorT<T>& x, const std::vector<T>& targets);

// ---------------------------------------------------------------------------
// Structured ops.
// ---------------------------------------------------------------------------

struct ConvSpec {
  int stride = 1;
  int dilation = 1;
  PadMode pad = PadMode::kZero;
};

// 2-D convolution (cross-correlation orientation, as usual in deep nets).
// x: [C,H,W] or [N,C,H,W]; w: [Cout,Cin,kh,kw] with odd kh==kw; optional
// bias [Cout] (pass an empty handle for none). Padding is same-style:
// dilation*(k-1)/2 on every side, so H,W are preserved at stride 1 and
// halved at stride 2 for even inputs.
template <typename T>
TensorT<T> conv2d(const TensorT<T>& x, const TensorT<T>& w, const TensorT<T>& b,
                  const ConvSpec& spec);

// Bilinear 2x upsampling with the align-corners-false sample grid
// (src = (dst+0.5)/2 - 0.5). Border handling follows the pad mode: kZero
// clamps to the edge (standard resize behavior), kWrap wraps, which keeps
// the op exactly equivariant to circular shifts. x: [C,H,W] or [N,C,H,W].
template <typename T>
TensorT<T> upsample2x(const TensorT<T>& x, PadMode pad);

// Fully connected layer: x [B,din] * w^T [din,dout] + b -> [B,dout].
// w is stored [dout,din]; bias optional.
template <typename T>
TensorT<T> linear(const TensorT<T>& x, const TensorT<T>& w, const TensorT<T>& b);

// Crop a c x c window (c odd) centered at pixel (u,v) out of feats
// [k,d,H,W] -> [k,d,c,c]. Out-of-bounds reads are zero; backward scatters
// into the in-bounds region only.
template <typename T>
TensorT<T> crop_stack(const TensorT<T>& feats, int u, int v, int c);

// Contiguous channel range [c0, c1) of x: [C,H,W] -> [c1-c0,H,W] or
// [N,C,H,W] -> [N,c1-c0,H,W].
template <typename T>
TensorT<T> channel_slice(const TensorT<T>& x, int c0, int c1);

// Gather scalar elements at the given flat indices -> [n,1]. Backward
// scatter-adds. Used to evaluate per-pixel regression heads on a window.
template <typename T>
TensorT<T> gather_flat(const TensorT<T>& x, const std::vector<int64_t>& indices);

// Cross-correlate a stack of kernels with a feature map, same-size output:
// out[w,u,v] = sum_{d,i,j} kernels[w,d,i,j] * key[d, u+i-c/2, v+j-c/2].
// key: [d,H,W]; kernels: [k,d,c,c], c odd -> [k,H,W]. Zero or wrap padding.
template <typename T>
TensorT<T> correlate(const TensorT<T>& key, const TensorT<T>& kernels, PadMode pad);

// Single-precision FFT fast path for correlate (forward only, no autodiff).
// Exact up to roundoff against the direct route; used at inference and in
// benchmarks. Zero padding only.
std::vector<float> correlate_fft(const std::vector<float>& key, int d, int H, int W,
                                 const std::vector<float>& kernels, int k, int c);

// ---------------------------------------------------------------------------
// Image geometry (data-side ops; outputs are leaves, no gradient flows back).
// ---------------------------------------------------------------------------

// Rotate img [C,H,W] about pivot pixel (u,v) by `angle` (radians): the
// output at pixel p samples the input at pivot + R(angle) * (p - pivot),
// bilinearly, zeros outside. R is the standard planar rotation
// [(cos,-sin),(sin,cos)] acting on (row,col) offsets.
template <typename T>
TensorT<T> rotate_image(const TensorT<T>& img, double angle, double pivot_u, double pivot_v);

// Stack of k rotations of obs [C,H,W] -> [k,C,H,W]; element w is
// rotate_image(obs, -w*2*pi/k, pivot). Element 0 is the identity (copied
// exactly, not resampled).
template <typename T>
TensorT<T> rotation_stack(const TensorT<T>& obs, int k, double pivot_u, double pivot_v);

// ---------------------------------------------------------------------------
// Mixture density network negative log-likelihood (fused op with analytic
// gradient). params: [B, K*(1+2*D)] laid out per batch row as K mixture
// logits, then K*D means, then K*D log-sigmas (clamped to [-7,7]).
// target: [B, D]. Mixture weights are softmax(logits / temperature).
// Returns [1]: mean NLL over the batch.
// ---------------------------------------------------------------------------
template <typename T>
TensorT<T> mdn_nll(const TensorT<T>& params, const TensorT<T>& target, int K, int D,
                   T temperature);

// Draw one sample from the mixture encoded by row b of params (values only).
template <typename T>
std::vector<T> mdn_sample(const TensorT<T>& params, int b, int K, int D, T temperature,
                          Rng& rng);

// ---------------------------------------------------------------------------
// Non-differentiable helpers on values.
// ---------------------------------------------------------------------------

// Index of the maximum element; ties break to the lowest flat (row-major)
// index, which makes argmax deterministic under permuted evaluation order.
template <typename T>
int64_t argmax_flat(const TensorT<T>& x);

// He-normal initialized weight tensor: normal(0, sqrt(2/fan_in)).
template <typename T>
TensorT<T> he_normal(const Shape& shape, int fan_in, Rng& rng, const std::string& name);

}  // namespace tensorgrad
