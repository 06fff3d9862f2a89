// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "mimojscc/jscc/config.hpp"
#include "mimojscc/nn/params.hpp"

namespace mimojscc::jscc {

/// ViT encoder, Siamese ViT decoder and residual equalizer over one
/// ParameterStore. Parameter names are prefixed enc., dec. and res.
class Model {
 public:
  Model(ModelConfig config, std::uint64_t seed);
  /// Wraps existing parameters; names and shapes must match a fresh model.
  Model(ModelConfig config, nn::ParameterStore params);

  const ModelConfig& config() const noexcept { return config_; }
  nn::ParameterStore& params() noexcept { return params_; }
  const nn::ParameterStore& params() const noexcept { return params_; }

  /// Copy whose parameters are graph constants.
  Model frozen() const;

  /// Patch sequence l x c (plus heatmap l x tw under CSIT) -> Z_e, l x tw.
  /// `positions` overrides the patch indices 0..l-1 fed to the positional embedding.
  nn::Tensor encode(const nn::Tensor& patches, const nn::Tensor* heatmap,
                    const std::optional<RealVector>& positions = std::nullopt) const;

  /// Equalized tokens l x tw and heatmap l x tw -> patch estimates l x c (unclamped).
  nn::Tensor decode(const nn::Tensor& symbols, const nn::Tensor& heatmap) const;

  /// Learned compensation for a 2M x k stacked [Re; Im] block received over
  /// h_est (M = m_max); returns 2M x k to add onto the ZF output.
  nn::Tensor residual(const nn::Tensor& y_stacked, const ComplexMatrix& h_est) const;

  /// One pre-norm transformer layer: G = F + MSA(LN1 F); F' = G + MLP(LN2 G).
  nn::Tensor transformer_layer(const std::string& prefix, const nn::Tensor& f) const;

 private:
  const nn::Tensor& p(const std::string& name) const { return params_.at(name); }
  nn::Tensor positional(const std::string& prefix, const RealVector& positions) const;
  nn::Tensor siamese_branch(const nn::Tensor& x) const;

  ModelConfig config_;
  nn::ParameterStore params_;
};

/// Parameters of a freshly initialized model, in registration order.
nn::ParameterStore init_params(const ModelConfig& config, std::uint64_t seed);

/// Model with parameters read from a checkpoint written for `config`.
Model load_model(const ModelConfig& config, const std::filesystem::path& checkpoint);

}  // namespace mimojscc::jscc
