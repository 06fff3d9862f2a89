// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <string>

#include "mimojscc/nn/params.hpp"

namespace mimojscc::nn {

struct GradCheckOptions {
  double step = 1e-6;
  /// Coordinates sampled per parameter; 0 checks every coordinate.
  Eigen::Index coords_per_param = 0;
  std::uint64_t seed = 1;
  /// Denominator floor: relative error is |a - n| / max(|a|, |n|, floor).
  double magnitude_floor = 1e-4;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_param;
  Eigen::Index worst_index = -1;
  double analytic = 0.0;
  double numeric = 0.0;
  std::size_t coords_checked = 0;
};

struct NamedTensor {
  std::string name;
  Tensor tensor;
};

/// Rebuilds the scalar loss graph from the current parameter values.
using LossFn = std::function<Tensor()>;

/// Central-difference check of backward() against `loss_fn` for the given
/// parameters. Values are restored afterwards; gradients are left cleared.
GradCheckResult gradient_check(const LossFn& loss_fn, std::span<const NamedTensor> params,
                               const GradCheckOptions& options = {});
GradCheckResult gradient_check(const LossFn& loss_fn, ParameterStore& store, const GradCheckOptions& options = {});

}  // namespace mimojscc::nn
