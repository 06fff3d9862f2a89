// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mimojscc/nn/params.hpp"

namespace mimojscc::nn {

struct AdamConfig {
  double lr = 5e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AdamConfig config;
  std::int64_t step = 0;
  std::vector<Matrix> first_moment;
  std::vector<Matrix> second_moment;
};

/// One bias-corrected Adam update over every parameter, then clears the
/// gradients. Throws ConfigError naming the first parameter without a gradient.
void adam_step(ParameterStore& store, AdamState& state);

}  // namespace mimojscc::nn
