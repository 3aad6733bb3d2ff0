#pragma once

#include <vector>

#include "pickplace/tensorgrad/tensor.hpp"

namespace tensorgrad {

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with bias correction. eps is added outside the square root.
// Parameters whose gradient buffer is empty are treated as having a zero
// gradient for that step (their moments still decay).
template <typename T>
class AdamT {
 public:
  AdamT(std::vector<TensorT<T>> params, AdamConfig cfg = {});

  void step();
  void zero_grad();
  int64_t t() const { return t_; }
  const AdamConfig& config() const { return cfg_; }
  std::vector<TensorT<T>>& params() { return params_; }

 private:
  std::vector<TensorT<T>> params_;
  std::vector<std::vector<T>> m_;
  std::vector<std::vector<T>> v_;
  AdamConfig cfg_;
  int64_t t_ = 0;
};

using Adam = AdamT<float>;

}  // namespace tensorgrad
