#include "pickplace/tensorgrad/tensor.hpp"

#include <cmath>
#include <sstream>
#include <unordered_set>

namespace tensorgrad {

int64_t numel(const Shape& s) {
  int64_t n = 1;
  for (int d : s) {
    if (d <= 0) throw pickplace::DimensionError("shape: non-positive dim in " + shape_str(s));
    n *= d;
  }
  return n;
}

std::string shape_str(const Shape& s) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << "]";
  return os.str();
}

bool same_shape(const Shape& a, const Shape& b) { return a == b; }

template <typename T>
TensorT<T> TensorT<T>::zeros(const Shape& shape) {
  auto n = std::make_shared<NodeT<T>>();
  n->shape = shape;
  n->value.assign(static_cast<size_t>(numel(shape)), T(0));
  return TensorT<T>(std::move(n));
}

template <typename T>
TensorT<T> TensorT<T>::full(const Shape& shape, T v) {
  auto t = zeros(shape);
  auto& val = t.value_mut();
  std::fill(val.begin(), val.end(), v);
  return t;
}

template <typename T>
TensorT<T> TensorT<T>::from_data(const Shape& shape, std::vector<T> data) {
  if (static_cast<int64_t>(data.size()) != numel(shape))
    throw pickplace::DimensionError("from_data: " + std::to_string(data.size()) +
                                    " values for shape " + shape_str(shape));
  auto n = std::make_shared<NodeT<T>>();
  n->shape = shape;
  n->value = std::move(data);
  return TensorT<T>(std::move(n));
}

template <typename T>
TensorT<T> TensorT<T>::param(const Shape& shape, std::vector<T> data, const std::string& name) {
  auto t = from_data(shape, std::move(data));
  t.node().requires_grad = true;
  t.node().name = name;
  return t;
}

template <typename T>
int TensorT<T>::dim(int i) const {
  const auto& s = node().shape;
  if (i < 0 || i >= static_cast<int>(s.size()))
    throw pickplace::IndexError("dim: axis " + std::to_string(i) + " for " + shape_str(s));
  return s[i];
}

template <typename T>
std::vector<T> TensorT<T>::grad() const {
  auto& n = node();
  if (!n.requires_grad) throw pickplace::ContractError("grad: tensor does not require grad");
  if (n.grad.empty()) return std::vector<T>(n.value.size(), T(0));
  return n.grad;
}

template <typename T>
T TensorT<T>::item() const {
  auto& n = node();
  if (n.value.size() != 1)
    throw pickplace::ContractError("item: tensor has shape " + shape_str(n.shape));
  return n.value[0];
}

template <typename T>
int64_t TensorT<T>::flat_index(std::initializer_list<int> idx) const {
  const auto& s = node().shape;
  if (idx.size() != s.size())
    throw pickplace::IndexError("at: " + std::to_string(idx.size()) + " indices for " +
                                shape_str(s));
  int64_t flat = 0;
  int axis = 0;
  for (int i : idx) {
    if (i < 0 || i >= s[axis])
      throw pickplace::IndexError("at: index " + std::to_string(i) + " out of range for axis " +
                                  std::to_string(axis) + " of " + shape_str(s));
    flat = flat * s[axis] + i;
    ++axis;
  }
  return flat;
}

template <typename T>
T TensorT<T>::at(std::initializer_list<int> idx) const {
  return node().value[static_cast<size_t>(flat_index(idx))];
}

template <typename T>
TensorT<T> TensorT<T>::detach() const {
  return from_data(node().shape, node().value);
}

template <typename T>
void backward(const TensorT<T>& root) {
  auto& rn = root.node();
  if (rn.value.size() != 1)
    throw pickplace::ContractError("backward: root must be scalar, got " + shape_str(rn.shape));

  // Iterative post-order DFS for the topological order.
  std::vector<NodeT<T>*> order;
  std::unordered_set<NodeT<T>*> seen;
  std::vector<std::pair<NodeT<T>*, size_t>> stack;
  stack.emplace_back(&rn, 0);
  seen.insert(&rn);
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      NodeT<T>* p = node->parents[next++].get();
      if (seen.insert(p).second) stack.emplace_back(p, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  rn.grad_buf()[0] += T(1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    NodeT<T>* n = *it;
    if (n->backward && !n->grad.empty()) n->backward(n);
  }
}

template <typename T>
void check_finite(const TensorT<T>& t, const std::string& what) {
  for (T v : t.value())
    if (!std::isfinite(static_cast<double>(v)))
      throw pickplace::NumericError(what + ": non-finite value encountered");
}

template struct NodeT<float>;
template struct NodeT<double>;
template class TensorT<float>;
template class TensorT<double>;
template void backward<float>(const TensorT<float>&);
template void backward<double>(const TensorT<double>&);
template void check_finite<float>(const TensorT<float>&, const std::string&);
template void check_finite<double>(const TensorT<double>&, const std::string&);

}  // namespace tensorgrad
