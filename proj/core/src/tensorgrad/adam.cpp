#include "pickplace/tensorgrad/adam.hpp"

#include <cmath>

#include "pickplace/errors.hpp"

namespace tensorgrad {

template <typename T>
AdamT<T>::AdamT(std::vector<TensorT<T>> params, AdamConfig cfg)
    : params_(std::move(params)), cfg_(cfg) {
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const auto& p : params_) {
    if (!p.requires_grad())
      throw pickplace::ContractError("Adam: parameter does not require grad");
    m_.emplace_back(static_cast<size_t>(p.size()), T(0));
    v_.emplace_back(static_cast<size_t>(p.size()), T(0));
  }
}

template <typename T>
void AdamT<T>::step() {
  ++t_;
  const T b1 = static_cast<T>(cfg_.beta1);
  const T b2 = static_cast<T>(cfg_.beta2);
  const T corr1 = static_cast<T>(1.0 - std::pow(cfg_.beta1, static_cast<double>(t_)));
  const T corr2 = static_cast<T>(1.0 - std::pow(cfg_.beta2, static_cast<double>(t_)));
  const T lr = static_cast<T>(cfg_.lr);
  const T eps = static_cast<T>(cfg_.eps);
  for (size_t i = 0; i < params_.size(); ++i) {
    NodeT<T>& node = params_[i].node();
    const std::vector<T>& g = node.grad;
    std::vector<T>& m = m_[i];
    std::vector<T>& v = v_[i];
    std::vector<T>& x = node.value;
    for (size_t j = 0; j < x.size(); ++j) {
      T gj = g.empty() ? T(0) : g[j];
      m[j] = b1 * m[j] + (T(1) - b1) * gj;
      v[j] = b2 * v[j] + (T(1) - b2) * gj * gj;
      T mhat = m[j] / corr1;
      T vhat = v[j] / corr2;
      x[j] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
  }
}

template <typename T>
void AdamT<T>::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

template class AdamT<float>;
template class AdamT<double>;

}  // namespace tensorgrad
