#pragma once

// Shared helpers for op implementations. Not installed.

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "pickplace/tensorgrad/tensor.hpp"

namespace tensorgrad {
namespace detail {

// Build an op node: value computed by the caller, requires_grad inferred
// from the parents, backward attached only when some parent needs it.
template <typename T>
TensorT<T> make_op(Shape shape, std::vector<T> value, std::vector<TensorT<T>> parents,
                   std::function<void(NodeT<T>*)> bwd) {
  auto n = std::make_shared<NodeT<T>>();
  n->shape = std::move(shape);
  n->value = std::move(value);
  n->parents.reserve(parents.size());
  for (auto& p : parents) {
    if (p.defined()) {
      n->requires_grad = n->requires_grad || p.node().requires_grad;
      n->parents.push_back(p.node_ptr());
    }
  }
  if (n->requires_grad) n->backward = std::move(bwd);
  return TensorT<T>(std::move(n));
}

// Row-major GEMM: C = alpha * op(A) op(B) + beta * C.
void gemm(bool trans_a, bool trans_b, int m, int n, int k, float alpha, const float* a, int lda,
          const float* b, int ldb, float beta, float* c, int ldc);
void gemm(bool trans_a, bool trans_b, int m, int n, int k, double alpha, const double* a, int lda,
          const double* b, int ldb, double beta, double* c, int ldc);

}  // namespace detail
}  // namespace tensorgrad
