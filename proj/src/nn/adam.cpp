// SPDX-License-Identifier: Apache-2.0
#include "mimojscc/nn/adam.hpp"

#include <fmt/format.h>

#include <cmath>

namespace mimojscc::nn {

void adam_step(ParameterStore& store, AdamState& state) {
  const auto& entries = store.entries();
  for (const auto& e : entries) {
    if (!e.tensor.has_grad()) throw ConfigError(fmt::format("adam_step: parameter '{}' has no gradient", e.name));
  }
  if (state.first_moment.size() != entries.size()) {
    state.first_moment.clear();
    state.second_moment.clear();
    for (const auto& e : entries) {
      state.first_moment.push_back(Matrix::Zero(e.tensor.rows(), e.tensor.cols()));
      state.second_moment.push_back(Matrix::Zero(e.tensor.rows(), e.tensor.cols()));
    }
  }

  const auto& cfg = state.config;
  ++state.step;
  const double correction1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double correction2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    Tensor param = entries[i].tensor;
    const Matrix& g = param.grad();
    Matrix& m = state.first_moment[i];
    Matrix& v = state.second_moment[i];
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.cwiseAbs2();
    if (cfg.lr != 0.0) {
      param.mutable_value().array() -=
          cfg.lr * (m.array() / correction1) / ((v.array() / correction2).sqrt() + cfg.eps);
    }
  }
  store.clear_grad();
}

}  // namespace mimojscc::nn
