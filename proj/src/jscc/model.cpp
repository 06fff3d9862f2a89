// SPDX-License-Identifier: Apache-2.0
#include "mimojscc/jscc/model.hpp"

#include <fmt/format.h>

#include <cmath>

#include "mimojscc/nn/checkpoint.hpp"
#include "mimojscc/nn/ops.hpp"

namespace mimojscc::jscc {
namespace {

using nn::Matrix;
using nn::Tensor;

constexpr std::uint64_t kInitStream = 0x1417;

struct Initializer {
  nn::ParameterStore& store;
  RngStream rng;

  void dense(const std::string& name, Eigen::Index in, Eigen::Index out, bool bias) {
    store.add(name + ".w", nn::uniform_init(rng, in, out));
    if (bias) store.add(name + ".b", Matrix::Zero(1, out), {static_cast<std::uint32_t>(out)});
  }
  void norm(const std::string& name, Eigen::Index d) {
    store.add(name + ".gamma", Matrix::Ones(1, d), {static_cast<std::uint32_t>(d)});
    store.add(name + ".beta", Matrix::Zero(1, d), {static_cast<std::uint32_t>(d)});
  }
  void layer(const std::string& prefix, const ModelConfig& c) {
    const auto ds = c.dim / c.heads;
    norm(prefix + ".ln1", c.dim);
    for (Eigen::Index h = 0; h < c.heads; ++h) {
      const auto head = fmt::format("{}.head{}", prefix, h);
      dense(head + ".q", c.dim, ds, false);
      dense(head + ".k", c.dim, ds, false);
      dense(head + ".v", c.dim, ds, false);
    }
    dense(prefix + ".proj", c.dim, c.dim, false);
    norm(prefix + ".ln2", c.dim);
    dense(prefix + ".mlp1", c.dim, c.mlp_hidden, true);
    dense(prefix + ".mlp2", c.mlp_hidden, c.dim, true);
  }
};

RealVector default_positions(Eigen::Index l) {
  RealVector pos(l);
  for (Eigen::Index i = 0; i < l; ++i) pos(i) = static_cast<double>(i) / static_cast<double>(l);
  return pos;
}

}  // namespace

nn::ParameterStore init_params(const ModelConfig& c, std::uint64_t seed) {
  c.validate();
  nn::ParameterStore store;
  Initializer init{store, RngStream(seed, kInitStream)};
  const auto tw = c.token_width();

  init.dense("enc.embed", c.encoder_input_dim(), c.dim, true);
  init.dense("enc.pos", 1, c.dim, true);
  for (Eigen::Index i = 0; i < c.depth; ++i) init.layer(fmt::format("enc.layer{}", i), c);
  init.dense("enc.out", c.dim, tw, false);

  init.dense("dec.siamese1", 2 * tw, c.dim, true);
  init.dense("dec.siamese2", c.dim, c.dim, true);
  init.dense("dec.merge", 2 * c.dim, c.dim, true);
  init.dense("dec.pos", 1, c.dim, true);
  for (Eigen::Index i = 0; i < c.depth; ++i) init.layer(fmt::format("dec.layer{}", i), c);
  init.dense("dec.out", c.dim, c.patch_dim(), true);

  if (c.uses_residual()) {
    const auto m = c.m_max;
    init.dense("res.fc1", 2 * m * m + 2 * m, c.residual_hidden, true);
    store.add("res.alpha", Matrix::Constant(1, 1, 0.25), {1});
    init.dense("res.fc2", c.residual_hidden, 2 * m, true);
  }
  return store;
}

Model::Model(ModelConfig config, std::uint64_t seed) : config_(config), params_(init_params(config, seed)) {}

Model::Model(ModelConfig config, nn::ParameterStore params) : config_(config), params_(std::move(params)) {
  const auto reference = init_params(config_, 0);
  if (reference.size() != params_.size()) {
    throw ConfigError(fmt::format("model expects {} parameters, got {}", reference.size(), params_.size()));
  }
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const auto& want = reference.entries()[i];
    const auto& got = params_.entries()[i];
    if (want.name != got.name || want.shape != got.shape) {
      throw ConfigError(fmt::format("parameter {} is '{}', expected '{}' with matching shape", i, got.name, want.name));
    }
  }
}

Model load_model(const ModelConfig& config, const std::filesystem::path& checkpoint) {
  Model model(config, 0);
  nn::load_checkpoint_into(model.params(), checkpoint);
  return model;
}

Model Model::frozen() const { return Model(config_, params_.frozen()); }

Tensor Model::positional(const std::string& prefix, const RealVector& positions) const {
  Matrix idx = positions;
  return nn::dense(Tensor::constant(std::move(idx)), p(prefix + ".pos.w"), p(prefix + ".pos.b"));
}

Tensor Model::transformer_layer(const std::string& prefix, const Tensor& f) const {
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(config_.dim));

  const Tensor x = nn::layer_norm(f, p(prefix + ".ln1.gamma"), p(prefix + ".ln1.beta"));
  std::vector<Tensor> heads;
  heads.reserve(static_cast<std::size_t>(config_.heads));
  for (Eigen::Index h = 0; h < config_.heads; ++h) {
    const auto head = fmt::format("{}.head{}", prefix, h);
    const Tensor q = nn::matmul(x, p(head + ".q.w"));
    const Tensor k = nn::matmul(x, p(head + ".k.w"));
    const Tensor v = nn::matmul(x, p(head + ".v.w"));
    const Tensor attn = nn::softmax_rows(nn::scale(nn::matmul(q, nn::transpose(k)), inv_sqrt_d));
    heads.push_back(nn::matmul(attn, v));
  }
  const Tensor g = nn::add(f, nn::matmul(nn::concat_cols(heads), p(prefix + ".proj.w")));

  const Tensor y = nn::layer_norm(g, p(prefix + ".ln2.gamma"), p(prefix + ".ln2.beta"));
  const Tensor hidden = nn::gelu(nn::dense(y, p(prefix + ".mlp1.w"), p(prefix + ".mlp1.b")));
  return nn::add(g, nn::dense(hidden, p(prefix + ".mlp2.w"), p(prefix + ".mlp2.b")));
}

Tensor Model::encode(const Tensor& patches, const Tensor* heatmap, const std::optional<RealVector>& positions) const {
  const auto l = config_.tokens();
  if (patches.rows() != l || patches.cols() != config_.patch_dim()) {
    throw DimensionError(fmt::format("encode: expected {}x{} patches, got {}x{}", l, config_.patch_dim(),
                                     patches.rows(), patches.cols()));
  }
  Tensor input = patches;
  if (config_.mode == CsiMode::Csit) {
    if (heatmap == nullptr) throw ConfigError("encode: closed-loop encoder needs the channel heatmap");
    input = nn::concat_cols(std::vector<Tensor>{patches, *heatmap});
  } else if (heatmap != nullptr) {
    throw ConfigError("encode: open-loop encoder takes no heatmap");
  }
  const RealVector pos = positions.value_or(default_positions(l));
  if (pos.size() != l) throw DimensionError("encode: one position per patch required");

  Tensor f = nn::add(nn::dense(input, p("enc.embed.w"), p("enc.embed.b")), positional("enc", pos));
  for (Eigen::Index i = 0; i < config_.depth; ++i) f = transformer_layer(fmt::format("enc.layer{}", i), f);
  return nn::matmul(f, p("enc.out.w"));
}

Tensor Model::siamese_branch(const Tensor& x) const {
  const Tensor h = nn::gelu(nn::dense(x, p("dec.siamese1.w"), p("dec.siamese1.b")));
  return nn::gelu(nn::dense(h, p("dec.siamese2.w"), p("dec.siamese2.b")));
}

Tensor Model::decode(const Tensor& symbols, const Tensor& heatmap) const {
  const auto l = config_.tokens();
  const auto tw = config_.token_width();
  if (symbols.rows() != l || symbols.cols() != tw || heatmap.rows() != l || heatmap.cols() != tw) {
    throw DimensionError(fmt::format("decode: symbols and heatmap must be {}x{}", l, tw));
  }
  const Tensor sd = nn::concat_cols(std::vector<Tensor>{symbols, heatmap});
  const Tensor merged = nn::dense(nn::concat_cols(std::vector<Tensor>{siamese_branch(sd), siamese_branch(nn::scale(sd, -1.0))}),
                                  p("dec.merge.w"), p("dec.merge.b"));
  Tensor f = nn::add(merged, positional("dec", default_positions(l)));
  for (Eigen::Index i = 0; i < config_.depth; ++i) f = transformer_layer(fmt::format("dec.layer{}", i), f);
  return nn::dense(f, p("dec.out.w"), p("dec.out.b"));
}

Tensor Model::residual(const Tensor& y_stacked, const ComplexMatrix& h_est) const {
  if (!config_.uses_residual()) throw ConfigError("residual: model has no residual equalizer");
  const auto m = config_.m_max;
  if (h_est.rows() != m || h_est.cols() != m || y_stacked.rows() != 2 * m) {
    throw DimensionError("residual: channel and block must span m_max antennas");
  }
  const auto uses = y_stacked.cols();
  Matrix h_row(1, 2 * m * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      h_row(0, i * m + j) = h_est(i, j).real();
      h_row(0, m * m + i * m + j) = h_est(i, j).imag();
    }
  }
  const Tensor h_part = Tensor::constant(h_row.replicate(uses, 1));
  const Tensor features = nn::concat_cols(std::vector<Tensor>{h_part, nn::transpose(y_stacked)});
  const Tensor hidden = nn::prelu(nn::dense(features, p("res.fc1.w"), p("res.fc1.b")), p("res.alpha"));
  return nn::transpose(nn::dense(hidden, p("res.fc2.w"), p("res.fc2.b")));
}

}  // namespace mimojscc::jscc
