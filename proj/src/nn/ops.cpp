// SPDX-License-Identifier: Apache-2.0
#include "mimojscc/nn/ops.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace mimojscc::nn {
namespace {

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(fmt::format("{}: shape {}x{} vs {}x{}", op, a.rows(), a.cols(), b.rows(), b.cols()));
  }
}

Node& input(const Node& self, std::size_t i) { return *self.inputs[i]; }

}  // namespace

double gelu_value(double x) { return 0.5 * x * (1.0 + std::erf(x * std::numbers::sqrt2 / 2.0)); }

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError(fmt::format("matmul: inner dimensions {} and {} differ", a.cols(), b.rows()));
  }
  Matrix out = a.value() * b.value();
  return make_op(std::move(out), {a, b}, [](const Node& self) {
    Node& x = input(self, 0);
    Node& y = input(self, 1);
    if (x.requires_grad) x.accumulate(self.grad * y.value.transpose());
    if (y.requires_grad) y.accumulate(x.value.transpose() * self.grad);
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  return make_op(a.value() + b.value(), {a, b}, [](const Node& self) {
    input(self, 0).accumulate(self.grad);
    input(self, 1).accumulate(self.grad);
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "sub");
  return make_op(a.value() - b.value(), {a, b}, [](const Node& self) {
    input(self, 0).accumulate(self.grad);
    input(self, 1).accumulate(-self.grad);
  });
}

Tensor scale(const Tensor& a, double factor) {
  return make_op(factor * a.value(), {a}, [factor](const Node& self) { input(self, 0).accumulate(factor * self.grad); });
}

Tensor add_row(const Tensor& a, const Tensor& row) {
  if (row.rows() != 1 || row.cols() != a.cols()) throw DimensionError("add_row: bias must be 1 x cols");
  Matrix out = a.value().rowwise() + row.value().row(0);
  return make_op(std::move(out), {a, row}, [](const Node& self) {
    input(self, 0).accumulate(self.grad);
    input(self, 1).accumulate(self.grad.colwise().sum());
  });
}

Tensor dense(const Tensor& x, const Tensor& w, const std::optional<Tensor>& b) {
  Tensor out = matmul(x, w);
  return b ? add_row(out, *b) : out;
}

Tensor lmul(const RealMatrix& a, const Tensor& x) {
  if (a.cols() != x.rows()) throw DimensionError("lmul: constant factor does not conform");
  Matrix out = a * x.value();
  return make_op(std::move(out), {x}, [a](const Node& self) { input(self, 0).accumulate(a.transpose() * self.grad); });
}

Tensor add_constant(const Tensor& x, const Matrix& c) {
  if (c.rows() != x.rows() || c.cols() != x.cols()) throw DimensionError("add_constant: shape mismatch");
  return make_op(x.value() + c, {x}, [](const Node& self) { input(self, 0).accumulate(self.grad); });
}

Tensor gelu(const Tensor& x) {
  Matrix out = x.value().unaryExpr([](double v) { return gelu_value(v); });
  return make_op(std::move(out), {x}, [](const Node& self) {
    Node& in = input(self, 0);
    const Matrix slope = in.value.unaryExpr([](double v) {
      const double cdf = 0.5 * (1.0 + std::erf(v * std::numbers::sqrt2 / 2.0));
      const double pdf = std::exp(-0.5 * v * v) * std::numbers::inv_sqrtpi / std::numbers::sqrt2;
      return cdf + v * pdf;
    });
    in.accumulate(self.grad.cwiseProduct(slope));
  });
}

Tensor prelu(const Tensor& x, const Tensor& alpha) {
  if (alpha.rows() != 1 || alpha.cols() != 1) throw DimensionError("prelu: alpha must be 1 x 1");
  const double a = alpha.value()(0, 0);
  Matrix out = x.value().unaryExpr([a](double v) { return v > 0.0 ? v : a * v; });
  return make_op(std::move(out), {x, alpha}, [](const Node& self) {
    Node& in = input(self, 0);
    Node& al = input(self, 1);
    const double a = al.value(0, 0);
    if (in.requires_grad) {
      in.accumulate(self.grad.binaryExpr(in.value, [a](double g, double v) { return v > 0.0 ? g : a * g; }));
    }
    if (al.requires_grad) {
      const double da = self.grad.binaryExpr(in.value, [](double g, double v) { return v > 0.0 ? 0.0 : g * v; }).sum();
      al.accumulate(Matrix::Constant(1, 1, da));
    }
  });
}

Tensor softmax_rows(const Tensor& x) {
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const double peak = x.value().row(r).maxCoeff();
    out.row(r) = (x.value().row(r).array() - peak).exp().matrix();
    out.row(r) /= out.row(r).sum();
  }
  return make_op(std::move(out), {x}, [](const Node& self) {
    const Eigen::VectorXd dots = self.grad.cwiseProduct(self.value).rowwise().sum();
    Matrix g = self.grad;
    g.colwise() -= dots;
    input(self, 0).accumulate(self.value.cwiseProduct(g));
  });
}

Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, double eps) {
  const Eigen::Index d = x.cols();
  if (gamma.rows() != 1 || gamma.cols() != d || beta.rows() != 1 || beta.cols() != d) {
    throw DimensionError("layer_norm: gamma and beta must be 1 x d");
  }
  Matrix xhat(x.rows(), d);
  Eigen::VectorXd inv_std(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const double mean = x.value().row(r).mean();
    const auto centered = (x.value().row(r).array() - mean).eval();
    const double var = centered.square().mean();
    inv_std(r) = 1.0 / std::sqrt(var + eps);
    xhat.row(r) = (centered * inv_std(r)).matrix();
  }
  Matrix out = (xhat.array().rowwise() * gamma.value().row(0).array()).matrix();
  out.rowwise() += beta.value().row(0);
  return make_op(std::move(out), {x, gamma, beta}, [xhat, inv_std](const Node& self) {
    Node& in = input(self, 0);
    Node& g = input(self, 1);
    Node& b = input(self, 2);
    const auto d = static_cast<double>(xhat.cols());
    if (in.requires_grad) {
      Matrix dxhat = (self.grad.array().rowwise() * g.value.row(0).array()).matrix();
      Matrix dx(xhat.rows(), xhat.cols());
      for (Eigen::Index r = 0; r < xhat.rows(); ++r) {
        const double s1 = dxhat.row(r).sum();
        const double s2 = dxhat.row(r).dot(xhat.row(r));
        dx.row(r) = (inv_std(r) / d) * (d * dxhat.row(r).array() - s1 - xhat.row(r).array() * s2).matrix();
      }
      in.accumulate(dx);
    }
    if (g.requires_grad) g.accumulate(self.grad.cwiseProduct(xhat).colwise().sum());
    if (b.requires_grad) b.accumulate(self.grad.colwise().sum());
  });
}

Tensor transpose(const Tensor& x) {
  Matrix out = x.value().transpose();
  return make_op(std::move(out), {x}, [](const Node& self) { input(self, 0).accumulate(self.grad.transpose()); });
}

Tensor concat_cols(std::span<const Tensor> parts) {
  if (parts.empty()) throw DimensionError("concat_cols: nothing to concatenate");
  const Eigen::Index rows = parts.front().rows();
  Eigen::Index cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != rows) throw DimensionError("concat_cols: row counts differ");
    cols += p.cols();
  }
  Matrix out(rows, cols);
  std::vector<Eigen::Index> offsets;
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    out.middleCols(at, p.cols()) = p.value();
    offsets.push_back(at);
    at += p.cols();
  }
  return make_op(std::move(out), std::vector<Tensor>(parts.begin(), parts.end()), [offsets](const Node& self) {
    for (std::size_t i = 0; i < self.inputs.size(); ++i) {
      Node& in = *self.inputs[i];
      if (in.requires_grad) in.accumulate(self.grad.middleCols(offsets[i], in.value.cols()));
    }
  });
}

Tensor concat_rows(std::span<const Tensor> parts) {
  if (parts.empty()) throw DimensionError("concat_rows: nothing to concatenate");
  const Eigen::Index cols = parts.front().cols();
  Eigen::Index rows = 0;
  for (const auto& p : parts) {
    if (p.cols() != cols) throw DimensionError("concat_rows: column counts differ");
    rows += p.rows();
  }
  Matrix out(rows, cols);
  std::vector<Eigen::Index> offsets;
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    out.middleRows(at, p.rows()) = p.value();
    offsets.push_back(at);
    at += p.rows();
  }
  return make_op(std::move(out), std::vector<Tensor>(parts.begin(), parts.end()), [offsets](const Node& self) {
    for (std::size_t i = 0; i < self.inputs.size(); ++i) {
      Node& in = *self.inputs[i];
      if (in.requires_grad) in.accumulate(self.grad.middleRows(offsets[i], in.value.rows()));
    }
  });
}

Tensor slice_cols(const Tensor& x, Eigen::Index start, Eigen::Index count) {
  if (start < 0 || count < 0 || start + count > x.cols()) throw DimensionError("slice_cols: out of range");
  Matrix out = x.value().middleCols(start, count);
  return make_op(std::move(out), {x}, [start](const Node& self) {
    Node& in = input(self, 0);
    Matrix g = Matrix::Zero(in.value.rows(), in.value.cols());
    g.middleCols(start, self.grad.cols()) = self.grad;
    in.accumulate(g);
  });
}

Tensor slice_rows(const Tensor& x, Eigen::Index start, Eigen::Index count) {
  if (start < 0 || count < 0 || start + count > x.rows()) throw DimensionError("slice_rows: out of range");
  Matrix out = x.value().middleRows(start, count);
  return make_op(std::move(out), {x}, [start](const Node& self) {
    Node& in = input(self, 0);
    Matrix g = Matrix::Zero(in.value.rows(), in.value.cols());
    g.middleRows(start, self.grad.rows()) = self.grad;
    in.accumulate(g);
  });
}

Tensor reshape(const Tensor& x, Eigen::Index rows, Eigen::Index cols) {
  if (rows * cols != x.value().size()) {
    throw DimensionError(fmt::format("reshape: {} entries into {}x{}", x.value().size(), rows, cols));
  }
  Matrix out = Eigen::Map<const Matrix>(x.value().data(), rows, cols);
  return make_op(std::move(out), {x}, [](const Node& self) {
    Node& in = input(self, 0);
    in.accumulate(Eigen::Map<const Matrix>(self.grad.data(), in.value.rows(), in.value.cols()));
  });
}

Tensor frobenius_normalize(const Tensor& x, double target_norm) {
  const double norm = x.value().norm();
  if (norm == 0.0) {
    return make_op(Matrix::Zero(x.rows(), x.cols()), {x}, [](const Node&) {});
  }
  Matrix out = (target_norm / norm) * x.value();
  return make_op(std::move(out), {x}, [norm, target_norm](const Node& self) {
    const double along = self.value.cwiseProduct(self.grad).sum() / (target_norm * target_norm);
    input(self, 0).accumulate((target_norm / norm) * (self.grad - along * self.value));
  });
}

Tensor mse_loss(const Tensor& prediction, const Matrix& target) {
  if (target.rows() != prediction.rows() || target.cols() != prediction.cols()) {
    throw DimensionError("mse_loss: prediction and target shapes differ");
  }
  const auto n = static_cast<double>(target.size());
  Matrix diff = prediction.value() - target;
  const double loss = diff.squaredNorm() / n;
  return make_op(Matrix::Constant(1, 1, loss), {prediction}, [diff = std::move(diff), n](const Node& self) {
    input(self, 0).accumulate((2.0 * self.grad(0, 0) / n) * diff);
  });
}

Tensor sum(const Tensor& x) {
  return make_op(Matrix::Constant(1, 1, x.value().sum()), {x}, [](const Node& self) {
    Node& in = input(self, 0);
    in.accumulate(Matrix::Constant(in.value.rows(), in.value.cols(), self.grad(0, 0)));
  });
}

}  // namespace mimojscc::nn
