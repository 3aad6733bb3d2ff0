#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <string>
#include <vector>

#include "pickplace/errors.hpp"

namespace tensorgrad {

using Shape = std::vector<int>;

int64_t numel(const Shape& s);
std::string shape_str(const Shape& s);
bool same_shape(const Shape& a, const Shape& b);

// Padding / border semantics shared by conv2d, upsample2x and correlate.
// kZero pads with zeros (resize ops clamp at the border instead, see the op
// docs); kWrap wraps around, which makes the ops exactly equivariant to
// circular shifts and is used by the equivariance test suite.
enum class PadMode { kZero, kWrap };

// One node of the autodiff graph. Produced by ops; owned via shared_ptr so a
// value stays alive as long as anything downstream references it.
template <typename T>
struct NodeT {
  Shape shape;
  std::vector<T> value;
  std::vector<T> grad;  // empty until first accumulation, then value-sized
  bool requires_grad = false;
  std::string name;  // non-empty only for named parameters
  std::vector<std::shared_ptr<NodeT<T>>> parents;
  // Reads this->grad and accumulates into the parents' grad buffers.
  std::function<void(NodeT<T>*)> backward;

  std::vector<T>& grad_buf() {
    if (grad.empty()) grad.assign(value.size(), T(0));
    return grad;
  }
};

// Value-semantics handle to a graph node. Copying a TensorT copies the
// handle, not the data. Ops are free functions (ops.hpp) that build new
// nodes; backward(loss) runs reverse-mode accumulation over the graph.
template <typename T>
class TensorT {
public:
  TensorT() = default;  // empty handle; used for "no bias" style optionals

  static TensorT zeros(const Shape& shape);
  static TensorT full(const Shape& shape, T v);
  static TensorT from_data(const Shape& shape, std::vector<T> data);
  // A leaf that participates in training: requires_grad set, name recorded
  // for checkpoints.
  static TensorT param(const Shape& shape, std::vector<T> data, const std::string& name);

  bool defined() const { return static_cast<bool>(n_); }
  const Shape& shape() const { return node().shape; }
  int ndim() const { return static_cast<int>(node().shape.size()); }
  int dim(int i) const;
  int64_t size() const { return static_cast<int64_t>(node().value.size()); }

  const std::vector<T>& value() const { return node().value; }
  std::vector<T>& value_mut() { return node().value; }
  // Gradient accumulated by backward(). Zeros if backward never reached this
  // node. Throws ContractError if the tensor does not require grad.
  std::vector<T> grad() const;
  void zero_grad() { node().grad.clear(); }

  bool requires_grad() const { return node().requires_grad; }
  const std::string& name() const { return node().name; }

  // Scalar access; tensor must have exactly one element.
  T item() const;
  // Element access by multi-index, bounds-checked.
  T at(std::initializer_list<int> idx) const;
  int64_t flat_index(std::initializer_list<int> idx) const;

  // A new leaf sharing no graph history (value copied).
  TensorT detach() const;

  std::shared_ptr<NodeT<T>> node_ptr() const { return n_; }
  NodeT<T>& node() const {
    if (!n_) throw pickplace::ContractError("tensor: empty handle");
    return *n_;
  }

  explicit TensorT(std::shared_ptr<NodeT<T>> n) : n_(std::move(n)) {}

private:
  std::shared_ptr<NodeT<T>> n_;
};

// Reverse-mode sweep from a scalar root. Seeds d(root)/d(root) = 1, walks the
// graph in reverse topological order and accumulates into every reachable
// parameter's grad buffer. Grads are accumulated, not overwritten, so calling
// backward twice without zero_grad doubles them.
template <typename T>
void backward(const TensorT<T>& root);

// Throws NumericError if any element is NaN or infinite.
template <typename T>
void check_finite(const TensorT<T>& t, const std::string& what);

using Tensor = TensorT<float>;
using Tensor64 = TensorT<double>;

extern template struct NodeT<float>;
extern template struct NodeT<double>;
extern template class TensorT<float>;
extern template class TensorT<double>;
extern template void backward<float>(const TensorT<float>&);
extern template void backward<double>(const TensorT<double>&);
extern template void check_finite<float>(const TensorT<float>&, const std::string&);
extern template void check_finite<double>(const TensorT<double>&, const std::string&);

}  // namespace tensorgrad
