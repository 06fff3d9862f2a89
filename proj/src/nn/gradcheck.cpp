// SPDX-License-Identifier: Apache-2.0
#include "mimojscc/nn/gradcheck.hpp"

#include <cmath>
#include <numeric>

namespace mimojscc::nn {
namespace {

std::vector<Eigen::Index> pick_coords(Eigen::Index size, Eigen::Index wanted, RngStream rng) {
  std::vector<Eigen::Index> all(static_cast<std::size_t>(size));
  std::iota(all.begin(), all.end(), Eigen::Index{0});
  if (wanted <= 0 || wanted >= size) return all;
  for (Eigen::Index i = 0; i < wanted; ++i) {
    const auto j = rng.uniform_int(i, size - 1);
    std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(j)]);
  }
  all.resize(static_cast<std::size_t>(wanted));
  return all;
}

}  // namespace

GradCheckResult gradient_check(const LossFn& loss_fn, std::span<const NamedTensor> params,
                               const GradCheckOptions& options) {
  for (const auto& p : params) p.tensor.node()->grad.resize(0, 0);
  backward(loss_fn());

  std::vector<Matrix> analytic;
  for (const auto& p : params) {
    analytic.push_back(p.tensor.has_grad() ? p.tensor.grad() : Matrix::Zero(p.tensor.rows(), p.tensor.cols()));
    p.tensor.node()->grad.resize(0, 0);
  }

  GradCheckResult result;
  RngStream rng(options.seed, 0);
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Tensor t = params[pi].tensor;
    const auto coords = pick_coords(t.value().size(), options.coords_per_param, rng.derive(pi));
    for (const auto idx : coords) {
      double& slot = t.mutable_value().data()[idx];
      const double saved = slot;
      slot = saved + options.step;
      const double up = loss_fn().item();
      slot = saved - options.step;
      const double down = loss_fn().item();
      slot = saved;

      const double numeric = (up - down) / (2.0 * options.step);
      const double a = analytic[pi].data()[idx];
      const double denom = std::max({std::abs(a), std::abs(numeric), options.magnitude_floor});
      const double err = std::abs(a - numeric) / denom;
      ++result.coords_checked;
      if (err > result.max_rel_error || !std::isfinite(err)) {
        result.max_rel_error = std::isfinite(err) ? err : std::numeric_limits<double>::infinity();
        result.worst_param = params[pi].name;
        result.worst_index = idx;
        result.analytic = a;
        result.numeric = numeric;
      }
    }
  }
  return result;
}

GradCheckResult gradient_check(const LossFn& loss_fn, ParameterStore& store, const GradCheckOptions& options) {
  std::vector<NamedTensor> params;
  for (const auto& e : store.entries()) params.push_back({e.name, e.tensor});
  return gradient_check(loss_fn, params, options);
}

}  // namespace mimojscc::nn
