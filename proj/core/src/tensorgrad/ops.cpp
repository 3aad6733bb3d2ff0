#include "pickplace/tensorgrad/ops.hpp"

#include <algorithm>
#include <cmath>

#include "internal.hpp"

namespace tensorgrad {

using pickplace::ContractError;
using pickplace::DimensionError;
using pickplace::IndexError;
using pickplace::RangeError;

namespace {

template <typename T>
void require_same_shape(const TensorT<T>& a, const TensorT<T>& b, const char* op) {
  if (!same_shape(a.shape(), b.shape()))
    throw DimensionError(std::string(op) + ": shape mismatch " + shape_str(a.shape()) + " vs " +
                         shape_str(b.shape()));
}

}  // namespace

template <typename T>
TensorT<T> add(const TensorT<T>& a, const TensorT<T>& b) {
  require_same_shape(a, b, "add");
  std::vector<T> out(a.value().size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = a.value()[i] + b.value()[i];
  auto an = a.node_ptr(), bn = b.node_ptr();
  return detail::make_op<T>(a.shape(), std::move(out), {a, b}, [an, bn](NodeT<T>* n) {
    if (an->requires_grad) {
      auto& ga = an->grad_buf();
      for (size_t i = 0; i < ga.size(); ++i) ga[i] += n->grad[i];
    }
    if (bn->requires_grad) {
      auto& gb = bn->grad_buf();
      for (size_t i = 0; i < gb.size(); ++i) gb[i] += n->grad[i];
    }
  });
}

template <typename T>
TensorT<T> sub(const TensorT<T>& a, const TensorT<T>& b) {
  require_same_shape(a, b, "sub");
  std::vector<T> out(a.value().size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = a.value()[i] - b.value()[i];
  auto an = a.node_ptr(), bn = b.node_ptr();
  return detail::make_op<T>(a.shape(), std::move(out), {a, b}, [an, bn](NodeT<T>* n) {
    if (an->requires_grad) {
      auto& ga = an->grad_buf();
      for (size_t i = 0; i < ga.size(); ++i) ga[i] += n->grad[i];
    }
    if (bn->requires_grad) {
      auto& gb = bn->grad_buf();
      for (size_t i = 0; i < gb.size(); ++i) gb[i] -= n->grad[i];
    }
  });
}

template <typename T>
TensorT<T> mul(const TensorT<T>& a, const TensorT<T>& b) {
  require_same_shape(a, b, "mul");
  std::vector<T> out(a.value().size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = a.value()[i] * b.value()[i];
  auto an = a.node_ptr(), bn = b.node_ptr();
  return detail::make_op<T>(a.shape(), std::move(out), {a, b}, [an, bn](NodeT<T>* n) {
    if (an->requires_grad) {
      auto& ga = an->grad_buf();
      for (size_t i = 0; i < ga.size(); ++i) ga[i] += n->grad[i] * bn->value[i];
    }
    if (bn->requires_grad) {
      auto& gb = bn->grad_buf();
      for (size_t i = 0; i < gb.size(); ++i) gb[i] += n->grad[i] * an->value[i];
    }
  });
}

template <typename T>
TensorT<T> affine(const TensorT<T>& x, T s, T b) {
  std::vector<T> out(x.value().size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = s * x.value()[i] + b;
  auto xn = x.node_ptr();
  return detail::make_op<T>(x.shape(), std::move(out), {x}, [xn, s](NodeT<T>* n) {
    auto& gx = xn->grad_buf();
    for (size_t i = 0; i < gx.size(); ++i) gx[i] += s * n->grad[i];
  });
}

template <typename T>
TensorT<T> relu(const TensorT<T>& x) {
  std::vector<T> out(x.value().size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = x.value()[i] > T(0) ? x.value()[i] : T(0);
  auto xn = x.node_ptr();
  return detail::make_op<T>(x.shape(), std::move(out), {x}, [xn](NodeT<T>* n) {
    auto& gx = xn->grad_buf();
    for (size_t i = 0; i < gx.size(); ++i)
      if (n->value[i] > T(0)) gx[i] += n->grad[i];
  });
}

template <typename T>
TensorT<T> sum(const TensorT<T>& x) {
  T acc = 0;
  for (T v : x.value()) acc += v;
  auto xn = x.node_ptr();
  return detail::make_op<T>({1}, {acc}, {x}, [xn](NodeT<T>* n) {
    auto& gx = xn->grad_buf();
    for (size_t i = 0; i < gx.size(); ++i) gx[i] += n->grad[0];
  });
}

template <typename T>
TensorT<T> mean(const TensorT<T>& x) {
  T inv = T(1) / static_cast<T>(x.size());
  T acc = 0;
  for (T v : x.value()) acc += v;
  acc *= inv;
  auto xn = x.node_ptr();
  return detail::make_op<T>({1}, {acc}, {x}, [xn, inv](NodeT<T>* n) {
    auto& gx = xn->grad_buf();
    for (size_t i = 0; i < gx.size(); ++i) gx[i] += inv * n->grad[0];
  });
}

template <typename T>
TensorT<T> huber(const TensorT<T>& pred, const TensorT<T>& target, T delta) {
  require_same_shape(pred, target, "huber");
  if (!(delta > T(0))) throw RangeError("huber: delta must be positive");
  std::vector<T> out(pred.value().size());
  for (size_t i = 0; i < out.size(); ++i) {
    T e = pred.value()[i] - target.value()[i];
    T a = std::abs(e);
    out[i] = a <= delta ? T(0.5) * e * e : delta * (a - T(0.5) * delta);
  }
  auto pn = pred.node_ptr(), tn = target.node_ptr();
  return detail::make_op<T>(pred.shape(), std::move(out), {pred, target},
                            [pn, tn, delta](NodeT<T>* n) {
                              for (size_t i = 0; i < n->grad.size(); ++i) {
                                T e = pn->value[i] - tn->value[i];
                                T d = std::abs(e) <= delta ? e : (e > T(0) ? delta : -delta);
                                if (pn->requires_grad) pn->grad_buf()[i] += d * n->grad[i];
                                if (tn->requires_grad) tn->grad_buf()[i] -= d * n->grad[i];
                              }
                            });
}

template <typename T>
TensorT<T> reshape(const TensorT<T>& x, const Shape& shape) {
  if (numel(shape) != static_cast<int64_t>(x.size()))
    throw DimensionError("reshape: element count mismatch: " + shape_str(x.shape()) +
                         " -> " + shape_str(shape));
  auto xn = x.node_ptr();
  return detail::make_op<T>(shape, std::vector<T>(x.value()), {x}, [xn](NodeT<T>* n) {
    auto& gx = xn->grad_buf();
    for (size_t i = 0; i < gx.size(); ++i) gx[i] += n->grad[i];
  });
}

template <typename T>
TensorT<T> dropout(const TensorT<T>& x, double p, Rng& rng) {
  if (p < 0.0 || p >= 1.0) throw RangeError("dropout: p must be in [0,1)");
  T scale = static_cast<T>(1.0 / (1.0 - p));
  auto mask = std::make_shared<std::vector<T>>(x.value().size());
  std::vector<T> out(x.value().size());
  for (size_t i = 0; i < out.size(); ++i) {
    (*mask)[i] = rng.uniform() < p ? T(0) : scale;
    out[i] = x.value()[i] * (*mask)[i];
  }
  auto xn = x.node_ptr();
  return detail::make_op<T>(x.shape(), std::move(out), {x}, [xn, mask](NodeT<T>* n) {
    auto& gx = xn->grad_buf();
    for (size_t i = 0; i < gx.size(); ++i) gx[i] += (*mask)[i] * n->grad[i];
  });
}

template <typename T>
TensorT<T> image_softmax(const TensorT<T>& x) {
  const auto& v = x.value();
  if (v.empty()) throw DimensionError("image_softmax: empty tensor");
  T mx = v[0];
  for (T e : v) mx = std::max(mx, e);
  std::vector<T> out(v.size());
  T denom = 0;
  for (size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp(v[i] - mx);
    denom += out[i];
  }
  T inv = T(1) / denom;
  for (auto& e : out) e *= inv;
  auto xn = x.node_ptr();
  return detail::make_op<T>(x.shape(), std::move(out), {x}, [xn](NodeT<T>* n) {
    // dL/dx = y * (g - <g, y>)
    T dot = 0;
    for (size_t i = 0; i < n->grad.size(); ++i) dot += n->grad[i] * n->value[i];
    auto& gx = xn->grad_buf();
    for (size_t i = 0; i < gx.size(); ++i) gx[i] += n->value[i] * (n->grad[i] - dot);
  });
}

template <typename T>
TensorT<T> cross_entropy_onehot(const TensorT<T>& probs, int64_t index) {
  if (index < 0 || index >= probs.size())
    throw IndexError("cross_entropy_onehot: index " + std::to_string(index) + " for " +
                     std::to_string(probs.size()) + " entries");
  T p = probs.value()[static_cast<size_t>(index)];
  auto pn = probs.node_ptr();
  return detail::make_op<T>({1}, {static_cast<T>(-std::log(p))}, {probs},
                            [pn, index](NodeT<T>* n) {
                              T p = pn->value[static_cast<size_t>(index)];
                              pn->grad_buf()[static_cast<size_t>(index)] -= n->grad[0] / p;
                            });
}

template <typename T>
TensorT<T> softmax_nll(const TensorT<T>& x, int64_t index) {
  if (index < 0 || index >= x.size())
    throw IndexError("softmax_nll: index " + std::to_string(index) + " for " +
                     std::to_string(x.size()) + " entries");
  const T* xv = x.value().data();
  const size_t n = static_cast<size_t>(x.size());
  double m = xv[0];
  for (size_t i = 1; i < n; ++i) m = std::max(m, static_cast<double>(xv[i]));
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) acc += std::exp(static_cast<double>(xv[i]) - m);
  const double lse = m + std::log(acc);
  const T loss = static_cast<T>(lse - static_cast<double>(xv[static_cast<size_t>(index)]));
  auto xn = x.node_ptr();
  return detail::make_op<T>({1}, {loss}, {x}, [xn, index, lse, n](NodeT<T>* node) {
    T g = node->grad[0];
    auto& gx = xn->grad_buf();
    for (size_t i = 0; i < n; ++i)
      gx[i] += g * static_cast<T>(std::exp(static_cast<double>(xn->value[i]) - lse));
    gx[static_cast<size_t>(index)] -= g;
  });
}

template <typename T>
TensorT<T> bce_logits(const TensorT<T>& x, const std::vector<T>& targets) {
  if (static_cast<int64_t>(targets.size()) != x.size())
    throw DimensionError("bce_logits: " + std::to_string(targets.size()) + " targets for " +
                         std::to_string(x.size()) + " logits");
  const size_t n = targets.size();
  const T* xv = x.value().data();
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double v = xv[i];
    acc += std::max(v, 0.0) - v * targets[i] + std::log1p(std::exp(-std::abs(v)));
  }
  auto xn = x.node_ptr();
  auto tgt = std::make_shared<std::vector<T>>(targets);
  return detail::make_op<T>({1}, {static_cast<T>(acc / static_cast<double>(n))}, {x},
                            [xn, tgt, n](NodeT<T>* node) {
                              T g = node->grad[0] / static_cast<T>(n);
                              auto& gx = xn->grad_buf();
                              for (size_t i = 0; i < n; ++i) {
                                double s = 1.0 / (1.0 + std::exp(-static_cast<double>(
                                                            xn->value[i])));
                                gx[i] += g * static_cast<T>(s - (*tgt)[i]);
                              }
                            });
}

template <typename T>
TensorT<T> gather_flat(const TensorT<T>& x, const std::vector<int64_t>& indices) {
  std::vector<T> out(indices.size());
  for (size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= x.size())
      throw IndexError("gather_flat: index out of range");
    out[i] = x.value()[static_cast<size_t>(indices[i])];
  }
  auto xn = x.node_ptr();
  auto idx = std::make_shared<std::vector<int64_t>>(indices);
  return detail::make_op<T>({static_cast<int>(indices.size()), 1}, std::move(out), {x},
                            [xn, idx](NodeT<T>* n) {
                              auto& gx = xn->grad_buf();
                              for (size_t i = 0; i < idx->size(); ++i)
                                gx[static_cast<size_t>((*idx)[i])] += n->grad[i];
                            });
}

template <typename T>
TensorT<T> channel_slice(const TensorT<T>& x, int c0, int c1) {
  if (x.ndim() != 3 && x.ndim() != 4)
    throw DimensionError("channel_slice: want [C,H,W] or [N,C,H,W]");
  const int cdim = x.ndim() - 3;
  const int C = x.dim(cdim);
  if (c0 < 0 || c1 > C || c0 >= c1)
    throw IndexError("channel_slice: bad range [" + std::to_string(c0) + ", " +
                     std::to_string(c1) + ") for " + std::to_string(C) + " channels");
  const int64_t outer = cdim == 0 ? 1 : x.dim(0);
  const int64_t inner = static_cast<int64_t>(x.dim(cdim + 1)) * x.dim(cdim + 2);
  Shape out_shape = x.shape();
  out_shape[cdim] = c1 - c0;
  std::vector<T> out(numel(out_shape));
  const auto& src = x.value();
  for (int64_t n = 0; n < outer; ++n)
    std::copy(src.begin() + (n * C + c0) * inner, src.begin() + (n * C + c1) * inner,
              out.begin() + n * (c1 - c0) * inner);
  auto xn = x.node_ptr();
  return detail::make_op<T>(out_shape, std::move(out), {x},
                            [xn, outer, inner, C, c0, c1](NodeT<T>* node) {
                              auto& gx = xn->grad_buf();
                              for (int64_t n = 0; n < outer; ++n) {
                                const T* g = node->grad.data() + n * (c1 - c0) * inner;
                                T* dst = gx.data() + (n * C + c0) * inner;
                                for (int64_t i = 0; i < (c1 - c0) * inner; ++i) dst[i] += g[i];
                              }
                            });
}

// --------------------------------------------------------------------------
// Rotations (data ops; outputs are leaves).
// --------------------------------------------------------------------------

template <typename T>
TensorT<T> rotate_image(const TensorT<T>& img, double angle, double pivot_u, double pivot_v) {
  if (img.ndim() != 3) throw DimensionError("rotate_image: want [C,H,W], got " + shape_str(img.shape()));
  const int C = img.dim(0), H = img.dim(1), W = img.dim(2);
  const double ca = std::cos(angle), sa = std::sin(angle);
  std::vector<T> out(static_cast<size_t>(C) * H * W, T(0));
  const auto& src = img.value();
  for (int u = 0; u < H; ++u) {
    for (int v = 0; v < W; ++v) {
      double du = u - pivot_u, dv = v - pivot_v;
      double su = pivot_u + ca * du - sa * dv;
      double sv = pivot_v + sa * du + ca * dv;
      int u0 = static_cast<int>(std::floor(su)), v0 = static_cast<int>(std::floor(sv));
      double fu = su - u0, fv = sv - v0;
      for (int c = 0; c < C; ++c) {
        double acc = 0.0;
        for (int di = 0; di < 2; ++di) {
          for (int dj = 0; dj < 2; ++dj) {
            int uu = u0 + di, vv = v0 + dj;
            if (uu < 0 || uu >= H || vv < 0 || vv >= W) continue;
            double w = (di ? fu : 1.0 - fu) * (dj ? fv : 1.0 - fv);
            acc += w * static_cast<double>(src[(static_cast<size_t>(c) * H + uu) * W + vv]);
          }
        }
        out[(static_cast<size_t>(c) * H + u) * W + v] = static_cast<T>(acc);
      }
    }
  }
  return TensorT<T>::from_data(img.shape(), std::move(out));
}

template <typename T>
TensorT<T> rotation_stack(const TensorT<T>& obs, int k, double pivot_u, double pivot_v) {
  if (obs.ndim() != 3) throw DimensionError("rotation_stack: want [C,H,W]");
  if (k < 1) throw RangeError("rotation_stack: k must be >= 1");
  const int C = obs.dim(0), H = obs.dim(1), W = obs.dim(2);
  std::vector<T> out;
  out.reserve(static_cast<size_t>(k) * C * H * W);
  out.insert(out.end(), obs.value().begin(), obs.value().end());  // bin 0: identity
  for (int w = 1; w < k; ++w) {
    double angle = -2.0 * M_PI * w / k;
    auto r = rotate_image(obs, angle, pivot_u, pivot_v);
    out.insert(out.end(), r.value().begin(), r.value().end());
  }
  return TensorT<T>::from_data({k, C, H, W}, std::move(out));
}

// --------------------------------------------------------------------------
// MDN negative log-likelihood (diagonal Gaussians, softmax mixture weights).
// --------------------------------------------------------------------------

namespace {
constexpr double kLogSigmaClamp = 7.0;
}

template <typename T>
TensorT<T> mdn_nll(const TensorT<T>& params, const TensorT<T>& target, int K, int D,
                   T temperature) {
  if (params.ndim() != 2 || params.dim(1) != K * (1 + 2 * D))
    throw DimensionError("mdn_nll: params must be [B, K*(1+2D)], got " + shape_str(params.shape()));
  if (target.ndim() != 2 || target.dim(0) != params.dim(0) || target.dim(1) != D)
    throw DimensionError("mdn_nll: target must be [B, D]");
  if (!(temperature > T(0))) throw RangeError("mdn_nll: temperature must be positive");
  const int B = params.dim(0);
  const int row = K * (1 + 2 * D);
  const auto& pv = params.value();
  const auto& tv = target.value();

  // Cache per-row responsibilities and per-component stats for backward.
  auto resp = std::make_shared<std::vector<double>>(static_cast<size_t>(B) * K);
  double total = 0.0;
  const double log2pi = std::log(2.0 * M_PI);
  for (int b = 0; b < B; ++b) {
    const T* r = &pv[static_cast<size_t>(b) * row];
    // log mixture weights: softmax(logits / temperature)
    double lmax = -1e300;
    for (int j = 0; j < K; ++j) lmax = std::max(lmax, static_cast<double>(r[j]) / temperature);
    double lse = 0.0;
    for (int j = 0; j < K; ++j) lse += std::exp(static_cast<double>(r[j]) / temperature - lmax);
    double logz = lmax + std::log(lse);
    // per-component joint log densities
    double jmax = -1e300;
    std::vector<double> logj(K);
    for (int j = 0; j < K; ++j) {
      double acc = static_cast<double>(r[j]) / temperature - logz;
      for (int d = 0; d < D; ++d) {
        double mu = r[K + j * D + d];
        double ls = std::clamp(static_cast<double>(r[K + K * D + j * D + d]), -kLogSigmaClamp,
                               kLogSigmaClamp);
        double z = (static_cast<double>(tv[static_cast<size_t>(b) * D + d]) - mu) / std::exp(ls);
        acc += -0.5 * z * z - ls - 0.5 * log2pi;
      }
      logj[j] = acc;
      jmax = std::max(jmax, acc);
    }
    double jsum = 0.0;
    for (int j = 0; j < K; ++j) jsum += std::exp(logj[j] - jmax);
    double loglik = jmax + std::log(jsum);
    total += -loglik;
    for (int j = 0; j < K; ++j) (*resp)[static_cast<size_t>(b) * K + j] = std::exp(logj[j] - loglik);
  }
  T val = static_cast<T>(total / B);

  auto pn = params.node_ptr();
  auto tnode = target.node_ptr();
  auto bwd = [pn, tnode, resp, K, D, row, B, temperature](NodeT<T>* n) {
    if (!pn->requires_grad) return;
    auto& g = pn->grad_buf();
    const T* pv = pn->value.data();
    const T* tv = tnode->value.data();
    double gscale = static_cast<double>(n->grad[0]) / B;
    for (int b = 0; b < B; ++b) {
      const T* r = &pv[static_cast<size_t>(b) * row];
      T* gr = &g[static_cast<size_t>(b) * row];
      // softmax(logits/T) needed for the logit gradient
      double lmax = -1e300;
      for (int j = 0; j < K; ++j) lmax = std::max(lmax, static_cast<double>(r[j]) / temperature);
      double lse = 0.0;
      for (int j = 0; j < K; ++j) lse += std::exp(static_cast<double>(r[j]) / temperature - lmax);
      for (int j = 0; j < K; ++j) {
        double pi_j = std::exp(static_cast<double>(r[j]) / temperature - lmax) / lse;
        double rj = (*resp)[static_cast<size_t>(b) * K + j];
        // d(-loglik)/d logit_j = (pi_j - r_j) / temperature
        gr[j] += static_cast<T>(gscale * (pi_j - rj) / static_cast<double>(temperature));
        for (int d = 0; d < D; ++d) {
          double mu = r[K + j * D + d];
          double raw_ls = static_cast<double>(r[K + K * D + j * D + d]);
          double ls = std::clamp(raw_ls, -kLogSigmaClamp, kLogSigmaClamp);
          double sigma = std::exp(ls);
          double z = (static_cast<double>(tv[static_cast<size_t>(b) * D + d]) - mu) / sigma;
          // d(-loglik)/d mu = -r_j * z / sigma
          gr[K + j * D + d] += static_cast<T>(gscale * (-rj * z / sigma));
          // d(-loglik)/d logsigma = -r_j * (z^2 - 1), zero outside the clamp
          if (raw_ls > -kLogSigmaClamp && raw_ls < kLogSigmaClamp)
            gr[K + K * D + j * D + d] += static_cast<T>(gscale * (-rj * (z * z - 1.0)));
        }
      }
    }
  };
  return detail::make_op<T>({1}, {val}, {params, target}, bwd);
}

template <typename T>
std::vector<T> mdn_sample(const TensorT<T>& params, int b, int K, int D, T temperature,
                          Rng& rng) {
  const int row = K * (1 + 2 * D);
  if (params.ndim() != 2 || params.dim(1) != row || b < 0 || b >= params.dim(0))
    throw DimensionError("mdn_sample: bad params shape or row");
  const T* r = &params.value()[static_cast<size_t>(b) * row];
  double lmax = -1e300;
  for (int j = 0; j < K; ++j) lmax = std::max(lmax, static_cast<double>(r[j]) / temperature);
  std::vector<double> w(K);
  double sum = 0.0;
  for (int j = 0; j < K; ++j) {
    w[j] = std::exp(static_cast<double>(r[j]) / temperature - lmax);
    sum += w[j];
  }
  double u = rng.uniform() * sum;
  int pick = K - 1;
  double acc = 0.0;
  for (int j = 0; j < K; ++j) {
    acc += w[j];
    if (u < acc) {
      pick = j;
      break;
    }
  }
  std::vector<T> out(D);
  for (int d = 0; d < D; ++d) {
    double mu = r[K + pick * D + d];
    double ls = std::clamp(static_cast<double>(r[K + K * D + pick * D + d]), -kLogSigmaClamp,
                           kLogSigmaClamp);
    out[d] = static_cast<T>(mu + std::exp(ls) * rng.normal());
  }
  return out;
}

template <typename T>
int64_t argmax_flat(const TensorT<T>& x) {
  const auto& v = x.value();
  if (v.empty()) throw DimensionError("argmax_flat: empty tensor");
  size_t best = 0;
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return static_cast<int64_t>(best);
}

template <typename T>
TensorT<T> he_normal(const Shape& shape, int fan_in, Rng& rng, const std::string& name) {
  if (fan_in <= 0) throw RangeError("he_normal: fan_in must be positive");
  double stddev = std::sqrt(2.0 / fan_in);
  std::vector<T> data(static_cast<size_t>(numel(shape)));
  for (auto& v : data) v = static_cast<T>(rng.normal(0.0, stddev));
  return TensorT<T>::param(shape, std::move(data), name);
}

#define INSTANTIATE_OPS(T)                                                                   \
  template TensorT<T> add(const TensorT<T>&, const TensorT<T>&);                             \
  template TensorT<T> sub(const TensorT<T>&, const TensorT<T>&);                             \
  template TensorT<T> mul(const TensorT<T>&, const TensorT<T>&);                             \
  template TensorT<T> affine(const TensorT<T>&, T, T);                                       \
  template TensorT<T> relu(const TensorT<T>&);                                               \
  template TensorT<T> sum(const TensorT<T>&);                                                \
  template TensorT<T> mean(const TensorT<T>&);                                               \
  template TensorT<T> huber(const TensorT<T>&, const TensorT<T>&, T);                        \
  template TensorT<T> reshape(const TensorT<T>&, const Shape&);                              \
  template TensorT<T> dropout(const TensorT<T>&, double, Rng&);                              \
  template TensorT<T> image_softmax(const TensorT<T>&);                                      \
  template TensorT<T> cross_entropy_onehot(const TensorT<T>&, int64_t);                      \
  template TensorT<T> softmax_nll(const TensorT<T>&, int64_t);                               \
  template TensorT<T> bce_logits(const TensorT<T>&, const std::vector<T>&);                  \
  template TensorT<T> gather_flat(const TensorT<T>&, const std::vector<int64_t>&);           \
  template TensorT<T> channel_slice(const TensorT<T>&, int, int);                            \
  template TensorT<T> rotate_image(const TensorT<T>&, double, double, double);               \
  template TensorT<T> rotation_stack(const TensorT<T>&, int, double, double);                \
  template TensorT<T> mdn_nll(const TensorT<T>&, const TensorT<T>&, int, int, T);            \
  template std::vector<T> mdn_sample(const TensorT<T>&, int, int, int, T, Rng&);             \
  template int64_t argmax_flat(const TensorT<T>&);                                           \
  template TensorT<T> he_normal(const Shape&, int, Rng&, const std::string&);

INSTANTIATE_OPS(float)
INSTANTIATE_OPS(double)
#undef INSTANTIATE_OPS

}  // namespace tensorgrad
