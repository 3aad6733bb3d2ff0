#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>

#include "internal.hpp"
#include "pickplace/tensorgrad/ops.hpp"

namespace tensorgrad {

using pickplace::DimensionError;

namespace {

int wrap_index(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}

// im2col over a row range [u0, u1) of the output for correlate: kernel c x c,
// stride 1, dilation 1, pad c/2. cols is [d*c*c, (u1-u0)*W] row-major.
template <typename T>
void corr_im2col(const T* key, int d, int H, int W, int c, PadMode pad, int u0, int u1, T* cols) {
  const int h = c / 2;
  const int64_t tile_n = static_cast<int64_t>(u1 - u0) * W;
  for (int dd = 0; dd < d; ++dd) {
    const T* kc = key + static_cast<int64_t>(dd) * H * W;
    for (int ki = 0; ki < c; ++ki) {
      for (int kj = 0; kj < c; ++kj) {
        T* row = cols + (static_cast<int64_t>(dd) * c * c + static_cast<int64_t>(ki) * c + kj) *
                            tile_n;
        for (int u = u0; u < u1; ++u) {
          int iu = u + ki - h;
          T* dst = row + static_cast<int64_t>(u - u0) * W;
          if (pad == PadMode::kWrap) {
            int uu = wrap_index(iu, H);
            for (int v = 0; v < W; ++v) dst[v] = kc[static_cast<int64_t>(uu) * W + wrap_index(v + kj - h, W)];
          } else if (iu < 0 || iu >= H) {
            std::memset(dst, 0, sizeof(T) * W);
          } else {
            const T* src = kc + static_cast<int64_t>(iu) * W;
            for (int v = 0; v < W; ++v) {
              int iv = v + kj - h;
              dst[v] = (iv < 0 || iv >= W) ? T(0) : src[iv];
            }
          }
        }
      }
    }
  }
}

template <typename T>
void corr_col2im_add(const T* cols, int d, int H, int W, int c, PadMode pad, int u0, int u1,
                     T* key_grad) {
  const int h = c / 2;
  const int64_t tile_n = static_cast<int64_t>(u1 - u0) * W;
  for (int dd = 0; dd < d; ++dd) {
    T* kc = key_grad + static_cast<int64_t>(dd) * H * W;
    for (int ki = 0; ki < c; ++ki) {
      for (int kj = 0; kj < c; ++kj) {
        const T* row = cols + (static_cast<int64_t>(dd) * c * c + static_cast<int64_t>(ki) * c +
                               kj) * tile_n;
        for (int u = u0; u < u1; ++u) {
          int iu = u + ki - h;
          if (pad == PadMode::kWrap)
            iu = wrap_index(iu, H);
          else if (iu < 0 || iu >= H)
            continue;
          const T* src = row + static_cast<int64_t>(u - u0) * W;
          T* dst = kc + static_cast<int64_t>(iu) * W;
          for (int v = 0; v < W; ++v) {
            int iv = v + kj - h;
            if (pad == PadMode::kWrap)
              iv = wrap_index(iv, W);
            else if (iv < 0 || iv >= W)
              continue;
            dst[iv] += src[v];
          }
        }
      }
    }
  }
}

int tile_rows(int W) { return std::max(1, 4096 / std::max(1, W)); }

}  // namespace

template <typename T>
TensorT<T> correlate(const TensorT<T>& key, const TensorT<T>& kernels, PadMode pad) {
  if (key.ndim() != 3) throw DimensionError("correlate: key must be [d,H,W]");
  if (kernels.ndim() != 4) throw DimensionError("correlate: kernels must be [k,d,c,c]");
  const int d = key.dim(0), H = key.dim(1), W = key.dim(2);
  const int k = kernels.dim(0), c = kernels.dim(2);
  if (kernels.dim(1) != d)
    throw DimensionError("correlate: kernels expect d=" + std::to_string(kernels.dim(1)) +
                         ", key has " + std::to_string(d));
  if (kernels.dim(3) != c || c % 2 == 0)
    throw DimensionError("correlate: kernel window must be square with odd size");

  const int64_t kdim = static_cast<int64_t>(d) * c * c;
  const int64_t n_out = static_cast<int64_t>(H) * W;
  const int rows = tile_rows(W);

  std::vector<T> out(static_cast<size_t>(k) * n_out);
  {
    std::vector<T> cols(static_cast<size_t>(kdim) * rows * W);
    for (int u0 = 0; u0 < H; u0 += rows) {
      int u1 = std::min(H, u0 + rows);
      int64_t tile_n = static_cast<int64_t>(u1 - u0) * W;
      corr_im2col(key.value().data(), d, H, W, c, pad, u0, u1, cols.data());
      // out rows are H*W long; write the tile with ldc = n_out
      detail::gemm(false, false, k, static_cast<int>(tile_n), static_cast<int>(kdim), T(1),
                   kernels.value().data(), static_cast<int>(kdim), cols.data(),
                   static_cast<int>(tile_n), T(0), out.data() + static_cast<int64_t>(u0) * W,
                   static_cast<int>(n_out));
    }
  }

  auto kn = key.node_ptr(), wn = kernels.node_ptr();
  PadMode pm = pad;
  auto bwd = [kn, wn, d, H, W, c, k, kdim, n_out, pm](NodeT<T>* node) {
    const int rows = tile_rows(W);
    std::vector<T> cols(static_cast<size_t>(kdim) * rows * W);
    const T* go = node->grad.data();
    for (int u0 = 0; u0 < H; u0 += rows) {
      int u1 = std::min(H, u0 + rows);
      int64_t tile_n = static_cast<int64_t>(u1 - u0) * W;
      if (wn->requires_grad) {
        corr_im2col(kn->value.data(), d, H, W, c, pm, u0, u1, cols.data());
        detail::gemm(false, true, k, static_cast<int>(kdim), static_cast<int>(tile_n), T(1),
                     go + static_cast<int64_t>(u0) * W, static_cast<int>(n_out), cols.data(),
                     static_cast<int>(tile_n), T(1), wn->grad_buf().data(),
                     static_cast<int>(kdim));
      }
      if (kn->requires_grad) {
        detail::gemm(true, false, static_cast<int>(kdim), static_cast<int>(tile_n), k, T(1),
                     wn->value.data(), static_cast<int>(kdim), go + static_cast<int64_t>(u0) * W,
                     static_cast<int>(n_out), T(0), cols.data(), static_cast<int>(tile_n));
        corr_col2im_add(cols.data(), d, H, W, c, pm, u0, u1, kn->grad_buf().data());
      }
    }
  };
  return detail::make_op<T>({k, H, W}, std::move(out), {key, kernels}, std::move(bwd));
}

template <typename T>
TensorT<T> crop_stack(const TensorT<T>& feats, int u, int v, int c) {
  if (feats.ndim() != 4) throw DimensionError("crop_stack: feats must be [k,d,H,W]");
  if (c % 2 == 0 || c < 1) throw DimensionError("crop_stack: window must be odd");
  const int k = feats.dim(0), d = feats.dim(1), H = feats.dim(2), W = feats.dim(3);
  const int h = c / 2;
  std::vector<T> out(static_cast<size_t>(k) * d * c * c, T(0));
  const auto& src = feats.value();
  for (int w = 0; w < k; ++w)
    for (int dd = 0; dd < d; ++dd) {
      const T* plane = src.data() + (static_cast<int64_t>(w) * d + dd) * H * W;
      T* dst = out.data() + (static_cast<int64_t>(w) * d + dd) * c * c;
      for (int i = 0; i < c; ++i) {
        int uu = u + i - h;
        if (uu < 0 || uu >= H) continue;
        for (int j = 0; j < c; ++j) {
          int vv = v + j - h;
          if (vv < 0 || vv >= W) continue;
          dst[static_cast<int64_t>(i) * c + j] = plane[static_cast<int64_t>(uu) * W + vv];
        }
      }
    }
  auto fn = feats.node_ptr();
  auto bwd = [fn, k, d, H, W, c, h, u, v](NodeT<T>* node) {
    auto& gf = fn->grad_buf();
    const T* go = node->grad.data();
    for (int w = 0; w < k; ++w)
      for (int dd = 0; dd < d; ++dd) {
        T* plane = gf.data() + (static_cast<int64_t>(w) * d + dd) * H * W;
        const T* src = go + (static_cast<int64_t>(w) * d + dd) * c * c;
        for (int i = 0; i < c; ++i) {
          int uu = u + i - h;
          if (uu < 0 || uu >= H) continue;
          for (int j = 0; j < c; ++j) {
            int vv = v + j - h;
            if (vv < 0 || vv >= W) continue;
            plane[static_cast<int64_t>(uu) * W + vv] += src[static_cast<int64_t>(i) * c + j];
          }
        }
      }
  };
  return detail::make_op<T>({k, d, c, c}, std::move(out), {feats}, std::move(bwd));
}

// ---------------------------------------------------------------------------
// FFT fast path. Single precision, zero padding, forward values only.
// ---------------------------------------------------------------------------

namespace {

// Smallest 5-smooth number >= n (FFTW is fast for these sizes).
int next_fast_size(int n) {
  for (int s = n;; ++s) {
    int m = s;
    for (int p : {2, 3, 5})
      while (m % p == 0) m /= p;
    if (m == 1) return s;
  }
}

}  // namespace

std::vector<float> correlate_fft(const std::vector<float>& key, int d, int H, int W,
                                 const std::vector<float>& kernels, int k, int c) {
  if (static_cast<int64_t>(key.size()) != static_cast<int64_t>(d) * H * W)
    throw DimensionError("correlate_fft: key size mismatch");
  if (static_cast<int64_t>(kernels.size()) != static_cast<int64_t>(k) * d * c * c)
    throw DimensionError("correlate_fft: kernels size mismatch");
  const int h = c / 2;
  const int L1 = next_fast_size(H + c - 1);
  const int L2 = next_fast_size(W + c - 1);
  const int Lc = L2 / 2 + 1;  // complex cols of the r2c transform
  const int64_t n_real = static_cast<int64_t>(L1) * L2;
  const int64_t n_cplx = static_cast<int64_t>(L1) * Lc;

  float* real_buf = fftwf_alloc_real(n_real);
  fftwf_complex* cplx_buf = fftwf_alloc_complex(n_cplx);
  fftwf_plan fwd = fftwf_plan_dft_r2c_2d(L1, L2, real_buf, cplx_buf, FFTW_ESTIMATE);
  fftwf_plan inv = fftwf_plan_dft_c2r_2d(L1, L2, cplx_buf, real_buf, FFTW_ESTIMATE);

  // Key spectra, one per feature channel.
  std::vector<std::complex<float>> key_f(static_cast<size_t>(d) * n_cplx);
  for (int dd = 0; dd < d; ++dd) {
    std::memset(real_buf, 0, sizeof(float) * n_real);
    for (int u = 0; u < H; ++u)
      std::memcpy(real_buf + static_cast<int64_t>(u) * L2,
                  key.data() + (static_cast<int64_t>(dd) * H + u) * W, sizeof(float) * W);
    fftwf_execute(fwd);
    std::memcpy(reinterpret_cast<float*>(key_f.data() + static_cast<int64_t>(dd) * n_cplx),
                cplx_buf, sizeof(fftwf_complex) * n_cplx);
  }

  std::vector<float> out(static_cast<size_t>(k) * H * W);
  std::vector<std::complex<float>> acc(n_cplx);
  const float scale = 1.0f / static_cast<float>(n_real);
  for (int w = 0; w < k; ++w) {
    std::fill(acc.begin(), acc.end(), std::complex<float>(0.f, 0.f));
    for (int dd = 0; dd < d; ++dd) {
      std::memset(real_buf, 0, sizeof(float) * n_real);
      for (int i = 0; i < c; ++i)
        std::memcpy(real_buf + static_cast<int64_t>(i) * L2,
                    kernels.data() + ((static_cast<int64_t>(w) * d + dd) * c + i) * c,
                    sizeof(float) * c);
      fftwf_execute(fwd);
      const auto* kf = reinterpret_cast<std::complex<float>*>(cplx_buf);
      const auto* xf = key_f.data() + static_cast<int64_t>(dd) * n_cplx;
      for (int64_t i = 0; i < n_cplx; ++i) acc[i] += std::conj(kf[i]) * xf[i];
    }
    std::memcpy(cplx_buf, acc.data(), sizeof(fftwf_complex) * n_cplx);
    fftwf_execute(inv);
    // out[u,v] = ccorr[(u-h) mod L1, (v-h) mod L2]
    for (int u = 0; u < H; ++u) {
      int su = (u - h + L1) % L1;
      for (int v = 0; v < W; ++v) {
        int sv = (v - h + L2) % L2;
        out[(static_cast<int64_t>(w) * H + u) * W + v] =
            real_buf[static_cast<int64_t>(su) * L2 + sv] * scale;
      }
    }
  }

  fftwf_destroy_plan(fwd);
  fftwf_destroy_plan(inv);
  fftwf_free(real_buf);
  fftwf_free(cplx_buf);
  return out;
}

#define INSTANTIATE_CORR(T)                                                       \
  template TensorT<T> correlate(const TensorT<T>&, const TensorT<T>&, PadMode); \
  template TensorT<T> crop_stack(const TensorT<T>&, int, int, int);

INSTANTIATE_CORR(float)
INSTANTIATE_CORR(double)
#undef INSTANTIATE_CORR

}  // namespace tensorgrad
