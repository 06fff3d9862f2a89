// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>

#include "mimojscc/nn/tensor.hpp"

namespace mimojscc::nn {

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);
/// Adds a 1 x n row to every row of a.
Tensor add_row(const Tensor& a, const Tensor& row);
/// x w (+ b).
Tensor dense(const Tensor& x, const Tensor& w, const std::optional<Tensor>& b = std::nullopt);

/// a * x with a constant left factor.
Tensor lmul(const RealMatrix& a, const Tensor& x);
/// x + c with a constant c.
Tensor add_constant(const Tensor& x, const Matrix& c);

/// Exact Gaussian-CDF GELU, x * Phi(x).
Tensor gelu(const Tensor& x);
/// max(x, 0) + alpha * min(x, 0) with a learnable 1 x 1 alpha.
Tensor prelu(const Tensor& x, const Tensor& alpha);
Tensor softmax_rows(const Tensor& x);
/// Per-row standardization followed by gamma * xhat + beta (gamma, beta are 1 x d).
Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, double eps = 1e-5);

Tensor transpose(const Tensor& x);
Tensor concat_cols(std::span<const Tensor> parts);
Tensor concat_rows(std::span<const Tensor> parts);
Tensor slice_cols(const Tensor& x, Eigen::Index start, Eigen::Index count);
Tensor slice_rows(const Tensor& x, Eigen::Index start, Eigen::Index count);
/// Row-major reshape.
Tensor reshape(const Tensor& x, Eigen::Index rows, Eigen::Index cols);

/// target_norm * x / ||x||_F; the zero matrix maps to itself.
Tensor frobenius_normalize(const Tensor& x, double target_norm);

/// Mean of squared differences against a constant target, as a 1 x 1 tensor.
Tensor mse_loss(const Tensor& prediction, const Matrix& target);
Tensor sum(const Tensor& x);

double gelu_value(double x);

}  // namespace mimojscc::nn
