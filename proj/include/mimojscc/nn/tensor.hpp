// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "mimojscc/linalg.hpp"

namespace mimojscc::nn {

using Matrix = RowMatrix;

struct Node;
using NodePtr = std::shared_ptr<Node>;

/// Propagates `self.grad` into the gradients of `self.inputs`.
using BackwardFn = std::function<void(const Node& self)>;

/// One vertex of the reverse-mode graph. Every tensor is a 2-D matrix;
/// vectors are 1 x n rows.
struct Node {
  Matrix value;
  Matrix grad;  // empty until something flows into it
  bool requires_grad = false;
  std::vector<NodePtr> inputs;
  BackwardFn backward;

  /// Adds `g` into this node's gradient (allocating zeros first).
  template <typename Derived>
  void accumulate(const Eigen::MatrixBase<Derived>& g) {
    if (!requires_grad) return;
    if (grad.size() == 0) grad = Matrix::Zero(value.rows(), value.cols());
    grad += g;
  }
};

/// Handle to a graph node. Copies share the node.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(NodePtr node) : node_(std::move(node)) {}

  /// Leaf without gradient tracking.
  static Tensor constant(Matrix value);
  /// Leaf whose gradient is accumulated by backward().
  static Tensor parameter(Matrix value);

  bool defined() const noexcept { return static_cast<bool>(node_); }
  const Matrix& value() const { return node_->value; }
  Matrix& mutable_value() { return node_->value; }
  const Matrix& grad() const { return node_->grad; }
  bool has_grad() const { return node_->grad.size() != 0; }
  bool requires_grad() const { return node_->requires_grad; }
  /// Replaces the gradient by zeros of the right shape.
  void zero_grad();
  /// Drops the gradient buffer entirely.
  void clear_grad() { node_->grad.resize(0, 0); }

  Eigen::Index rows() const { return node_->value.rows(); }
  Eigen::Index cols() const { return node_->value.cols(); }
  /// Value of a 1 x 1 tensor.
  double item() const;

  const NodePtr& node() const noexcept { return node_; }

 private:
  NodePtr node_;
};

/// Builds an op result. The graph edge and backward closure are kept only
/// when some input requires a gradient.
Tensor make_op(Matrix value, std::vector<Tensor> inputs, BackwardFn backward);

/// Reverse sweep from a 1 x 1 loss; parameter gradients accumulate.
void backward(const Tensor& loss);

}  // namespace mimojscc::nn
