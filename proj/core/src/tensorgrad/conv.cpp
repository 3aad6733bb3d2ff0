#include <cblas.h>

#include <cmath>
#include <cstring>

#include "internal.hpp"
#include "pickplace/tensorgrad/ops.hpp"

namespace tensorgrad {

using pickplace::DimensionError;
using pickplace::RangeError;

namespace detail {

void gemm(bool trans_a, bool trans_b, int m, int n, int k, float alpha, const float* a, int lda,
          const float* b, int ldb, float beta, float* c, int ldc) {
  cblas_sgemm(CblasRowMajor, trans_a ? CblasTrans : CblasNoTrans,
              trans_b ? CblasTrans : CblasNoTrans, m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
}

void gemm(bool trans_a, bool trans_b, int m, int n, int k, double alpha, const double* a, int lda,
          const double* b, int ldb, double beta, double* c, int ldc) {
  cblas_dgemm(CblasRowMajor, trans_a ? CblasTrans : CblasNoTrans,
              trans_b ? CblasTrans : CblasNoTrans, m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
}

}  // namespace detail

namespace {

struct ConvDims {
  int C, H, W, Cout, ksize, pad, Ho, Wo;
};

int wrap_index(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}

// cols is [C*k*k, Ho*Wo] row-major.
template <typename T>
void im2col(const T* x, const ConvDims& d, const ConvSpec& s, T* cols) {
  const int K = d.ksize;
  const int64_t n_out = static_cast<int64_t>(d.Ho) * d.Wo;
  for (int c = 0; c < d.C; ++c) {
    const T* xc = x + static_cast<int64_t>(c) * d.H * d.W;
    for (int ki = 0; ki < K; ++ki) {
      for (int kj = 0; kj < K; ++kj) {
        T* row = cols + (static_cast<int64_t>(c) * K * K + ki * K + kj) * n_out;
        for (int ou = 0; ou < d.Ho; ++ou) {
          int iu = ou * s.stride - d.pad + ki * s.dilation;
          T* dst = row + static_cast<int64_t>(ou) * d.Wo;
          if (s.pad == PadMode::kWrap) {
            int u = wrap_index(iu, d.H);
            for (int ov = 0; ov < d.Wo; ++ov) {
              int v = wrap_index(ov * s.stride - d.pad + kj * s.dilation, d.W);
              dst[ov] = xc[static_cast<int64_t>(u) * d.W + v];
            }
          } else if (iu < 0 || iu >= d.H) {
            std::memset(dst, 0, sizeof(T) * d.Wo);
          } else {
            const T* src = xc + static_cast<int64_t>(iu) * d.W;
            for (int ov = 0; ov < d.Wo; ++ov) {
              int iv = ov * s.stride - d.pad + kj * s.dilation;
              dst[ov] = (iv < 0 || iv >= d.W) ? T(0) : src[iv];
            }
          }
        }
      }
    }
  }
}

// Scatter-add of cols back into the input layout (adjoint of im2col).
template <typename T>
void col2im_add(const T* cols, const ConvDims& d, const ConvSpec& s, T* x) {
  const int K = d.ksize;
  const int64_t n_out = static_cast<int64_t>(d.Ho) * d.Wo;
  for (int c = 0; c < d.C; ++c) {
    T* xc = x + static_cast<int64_t>(c) * d.H * d.W;
    for (int ki = 0; ki < K; ++ki) {
      for (int kj = 0; kj < K; ++kj) {
        const T* row = cols + (static_cast<int64_t>(c) * K * K + ki * K + kj) * n_out;
        for (int ou = 0; ou < d.Ho; ++ou) {
          int iu = ou * s.stride - d.pad + ki * s.dilation;
          if (s.pad == PadMode::kWrap)
            iu = wrap_index(iu, d.H);
          else if (iu < 0 || iu >= d.H)
            continue;
          const T* src = row + static_cast<int64_t>(ou) * d.Wo;
          T* dst = xc + static_cast<int64_t>(iu) * d.W;
          for (int ov = 0; ov < d.Wo; ++ov) {
            int iv = ov * s.stride - d.pad + kj * s.dilation;
            if (s.pad == PadMode::kWrap)
              iv = wrap_index(iv, d.W);
            else if (iv < 0 || iv >= d.W)
              continue;
            dst[iv] += src[ov];
          }
        }
      }
    }
  }
}

}  // namespace

template <typename T>
TensorT<T> conv2d(const TensorT<T>& x, const TensorT<T>& w, const TensorT<T>& b,
                  const ConvSpec& spec) {
  const bool batched = x.ndim() == 4;
  if (!batched && x.ndim() != 3)
    throw DimensionError("conv2d: input must be [C,H,W] or [N,C,H,W], got " +
                         shape_str(x.shape()));
  if (w.ndim() != 4) throw DimensionError("conv2d: weights must be [Cout,Cin,k,k]");
  if (w.dim(2) != w.dim(3) || w.dim(2) % 2 == 0)
    throw DimensionError("conv2d: kernel must be square with odd size");
  if (spec.stride < 1 || spec.dilation < 1)
    throw RangeError("conv2d: stride and dilation must be >= 1");

  ConvDims d;
  const int N = batched ? x.dim(0) : 1;
  d.C = batched ? x.dim(1) : x.dim(0);
  d.H = batched ? x.dim(2) : x.dim(1);
  d.W = batched ? x.dim(3) : x.dim(2);
  d.Cout = w.dim(0);
  d.ksize = w.dim(2);
  if (w.dim(1) != d.C)
    throw DimensionError("conv2d: weight expects " + std::to_string(w.dim(1)) +
                         " input channels, input has " + std::to_string(d.C));
  if (b.defined() && (b.ndim() != 1 || b.dim(0) != d.Cout))
    throw DimensionError("conv2d: bias must be [Cout]");
  d.pad = spec.dilation * (d.ksize - 1) / 2;
  auto out_size = [&](int in) {
    return (in + 2 * d.pad - spec.dilation * (d.ksize - 1) - 1) / spec.stride + 1;
  };
  d.Ho = out_size(d.H);
  d.Wo = out_size(d.W);
  if (d.Ho < 1 || d.Wo < 1) throw DimensionError("conv2d: output would be empty");

  const int64_t kdim = static_cast<int64_t>(d.C) * d.ksize * d.ksize;
  const int64_t n_out = static_cast<int64_t>(d.Ho) * d.Wo;
  const int64_t in_img = static_cast<int64_t>(d.C) * d.H * d.W;
  const int64_t out_img = static_cast<int64_t>(d.Cout) * n_out;

  std::vector<T> out(static_cast<size_t>(N) * out_img);
  {
    std::vector<T> cols(static_cast<size_t>(kdim) * n_out);
    for (int n = 0; n < N; ++n) {
      im2col(x.value().data() + n * in_img, d, spec, cols.data());
      detail::gemm(false, false, d.Cout, static_cast<int>(n_out), static_cast<int>(kdim), T(1),
                   w.value().data(), static_cast<int>(kdim), cols.data(),
                   static_cast<int>(n_out), T(0), out.data() + n * out_img,
                   static_cast<int>(n_out));
    }
  }
  if (b.defined()) {
    for (int n = 0; n < N; ++n)
      for (int co = 0; co < d.Cout; ++co) {
        T bias = b.value()[co];
        T* dst = out.data() + n * out_img + co * n_out;
        for (int64_t i = 0; i < n_out; ++i) dst[i] += bias;
      }
  }

  Shape out_shape = batched ? Shape{N, d.Cout, d.Ho, d.Wo} : Shape{d.Cout, d.Ho, d.Wo};
  auto xn = x.node_ptr(), wn = w.node_ptr();
  auto bn = b.defined() ? b.node_ptr() : nullptr;
  ConvSpec sp = spec;
  auto bwd = [xn, wn, bn, d, sp, N, kdim, n_out, in_img, out_img](NodeT<T>* node) {
    const T* x = xn->value.data();
    const T* w = wn->value.data();
    const T* go = node->grad.data();
    std::vector<T> cols(static_cast<size_t>(kdim) * n_out);
    for (int n = 0; n < N; ++n) {
      const T* gout = go + n * out_img;
      if (wn->requires_grad) {
        im2col(x + n * in_img, d, sp, cols.data());
        // dW += dOut * cols^T
        detail::gemm(false, true, d.Cout, static_cast<int>(kdim), static_cast<int>(n_out), T(1),
                     gout, static_cast<int>(n_out), cols.data(), static_cast<int>(n_out), T(1),
                     wn->grad_buf().data(), static_cast<int>(kdim));
      }
      if (xn->requires_grad) {
        // dcols = W^T * dOut, then scatter back
        detail::gemm(true, false, static_cast<int>(kdim), static_cast<int>(n_out), d.Cout, T(1),
                     w, static_cast<int>(kdim), gout, static_cast<int>(n_out), T(0), cols.data(),
                     static_cast<int>(n_out));
        col2im_add(cols.data(), d, sp, xn->grad_buf().data() + n * in_img);
      }
    }
    if (bn && bn->requires_grad) {
      auto& gb = bn->grad_buf();
      for (int n = 0; n < N; ++n)
        for (int co = 0; co < d.Cout; ++co) {
          const T* src = go + n * out_img + co * n_out;
          T acc = 0;
          for (int64_t i = 0; i < n_out; ++i) acc += src[i];
          gb[co] += acc;
        }
    }
  };
  return detail::make_op<T>(std::move(out_shape), std::move(out), {x, w, b}, std::move(bwd));
}

template <typename T>
TensorT<T> linear(const TensorT<T>& x, const TensorT<T>& w, const TensorT<T>& b) {
  if (x.ndim() != 2 || w.ndim() != 2) throw DimensionError("linear: x [B,din], w [dout,din]");
  const int B = x.dim(0), din = x.dim(1), dout = w.dim(0);
  if (w.dim(1) != din)
    throw DimensionError("linear: weight expects din=" + std::to_string(w.dim(1)) +
                         ", input has " + std::to_string(din));
  if (b.defined() && (b.ndim() != 1 || b.dim(0) != dout))
    throw DimensionError("linear: bias must be [dout]");

  std::vector<T> out(static_cast<size_t>(B) * dout);
  detail::gemm(false, true, B, dout, din, T(1), x.value().data(), din, w.value().data(), din,
               T(0), out.data(), dout);
  if (b.defined())
    for (int i = 0; i < B; ++i)
      for (int j = 0; j < dout; ++j) out[static_cast<size_t>(i) * dout + j] += b.value()[j];

  auto xn = x.node_ptr(), wn = w.node_ptr();
  auto bn = b.defined() ? b.node_ptr() : nullptr;
  auto bwd = [xn, wn, bn, B, din, dout](NodeT<T>* node) {
    const T* go = node->grad.data();
    if (xn->requires_grad)
      detail::gemm(false, false, B, din, dout, T(1), go, dout, wn->value.data(), din, T(1),
                   xn->grad_buf().data(), din);
    if (wn->requires_grad)
      detail::gemm(true, false, dout, din, B, T(1), go, dout, xn->value.data(), din, T(1),
                   wn->grad_buf().data(), din);
    if (bn && bn->requires_grad) {
      auto& gb = bn->grad_buf();
      for (int i = 0; i < B; ++i)
        for (int j = 0; j < dout; ++j) gb[j] += go[static_cast<size_t>(i) * dout + j];
    }
  };
  return detail::make_op<T>({B, dout}, std::move(out), {x, w, b}, std::move(bwd));
}

template <typename T>
TensorT<T> upsample2x(const TensorT<T>& x, PadMode pad) {
  const bool batched = x.ndim() == 4;
  if (!batched && x.ndim() != 3)
    throw DimensionError("upsample2x: input must be [C,H,W] or [N,C,H,W]");
  const int N = batched ? x.dim(0) : 1;
  const int C = batched ? x.dim(1) : x.dim(0);
  const int H = batched ? x.dim(2) : x.dim(1);
  const int W = batched ? x.dim(3) : x.dim(2);
  const int Ho = 2 * H, Wo = 2 * W;

  // Per output index: two source taps and their weights.
  struct Tap {
    int a, b;
    T wa, wb;
  };
  auto make_taps = [&](int in, int outn) {
    std::vector<Tap> taps(outn);
    for (int i = 0; i < outn; ++i) {
      double s = (i + 0.5) / 2.0 - 0.5;
      int s0 = static_cast<int>(std::floor(s));
      double f = s - s0;
      int a = s0, b = s0 + 1;
      if (pad == PadMode::kWrap) {
        a = wrap_index(a, in);
        b = wrap_index(b, in);
      } else {
        a = std::clamp(a, 0, in - 1);
        b = std::clamp(b, 0, in - 1);
      }
      taps[i] = {a, b, static_cast<T>(1.0 - f), static_cast<T>(f)};
    }
    return taps;
  };
  auto rows = std::make_shared<std::vector<Tap>>(make_taps(H, Ho));
  auto colt = std::make_shared<std::vector<Tap>>(make_taps(W, Wo));

  const int64_t in_ch = static_cast<int64_t>(H) * W;
  const int64_t out_ch = static_cast<int64_t>(Ho) * Wo;
  std::vector<T> out(static_cast<size_t>(N) * C * out_ch);
  for (int64_t nc = 0; nc < static_cast<int64_t>(N) * C; ++nc) {
    const T* src = x.value().data() + nc * in_ch;
    T* dst = out.data() + nc * out_ch;
    for (int i = 0; i < Ho; ++i) {
      const Tap& r = (*rows)[i];
      const T* ra = src + static_cast<int64_t>(r.a) * W;
      const T* rb = src + static_cast<int64_t>(r.b) * W;
      for (int j = 0; j < Wo; ++j) {
        const Tap& cc = (*colt)[j];
        dst[static_cast<int64_t>(i) * Wo + j] = r.wa * (cc.wa * ra[cc.a] + cc.wb * ra[cc.b]) +
                                                r.wb * (cc.wa * rb[cc.a] + cc.wb * rb[cc.b]);
      }
    }
  }

  Shape out_shape = batched ? Shape{N, C, Ho, Wo} : Shape{C, Ho, Wo};
  auto xn = x.node_ptr();
  auto bwd = [xn, rows, colt, N, C, H, W, Ho, Wo, in_ch, out_ch](NodeT<T>* node) {
    auto& gx = xn->grad_buf();
    const T* go = node->grad.data();
    for (int64_t nc = 0; nc < static_cast<int64_t>(N) * C; ++nc) {
      T* dst = gx.data() + nc * in_ch;
      const T* src = go + nc * out_ch;
      for (int i = 0; i < Ho; ++i) {
        const Tap& r = (*rows)[i];
        for (int j = 0; j < Wo; ++j) {
          const Tap& cc = (*colt)[j];
          T g = src[static_cast<int64_t>(i) * Wo + j];
          dst[static_cast<int64_t>(r.a) * W + cc.a] += r.wa * cc.wa * g;
          dst[static_cast<int64_t>(r.a) * W + cc.b] += r.wa * cc.wb * g;
          dst[static_cast<int64_t>(r.b) * W + cc.a] += r.wb * cc.wa * g;
          dst[static_cast<int64_t>(r.b) * W + cc.b] += r.wb * cc.wb * g;
        }
      }
    }
  };
  return detail::make_op<T>(std::move(out_shape), std::move(out), {x}, std::move(bwd));
}

#define INSTANTIATE_CONV(T)                                                                \
  template TensorT<T> conv2d(const TensorT<T>&, const TensorT<T>&, const TensorT<T>&,     \
                             const ConvSpec&);                                             \
  template TensorT<T> linear(const TensorT<T>&, const TensorT<T>&, const TensorT<T>&);    \
  template TensorT<T> upsample2x(const TensorT<T>&, PadMode);

INSTANTIATE_CONV(float)
INSTANTIATE_CONV(double)
#undef INSTANTIATE_CONV

}  // namespace tensorgrad
