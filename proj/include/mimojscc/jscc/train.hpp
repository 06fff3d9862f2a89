// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "mimojscc/harness/metrics.hpp"
#include "mimojscc/image.hpp"
#include "mimojscc/jscc/pipeline.hpp"
#include "mimojscc/nn/adam.hpp"

namespace mimojscc::jscc {

inline constexpr std::uint64_t kTrainStream = 0x7261;
inline constexpr std::uint64_t kEvalStream = 0x6576;

struct TrainOptions {
  std::int64_t steps = 1000;
  Eigen::Index batch = 16;
  nn::AdamConfig adam{.lr = 1e-3};
  std::uint64_t seed = 1;
  /// Overrides the model's training SNR range and adds channel options.
  std::optional<ChannelPlan> plan;
  std::int64_t eval_every = 100;  // 0 disables validation
  Eigen::Index val_draws = 2;
  bool early_stopping = true;
  int patience = 10;
  double min_delta_db = 0.01;
};

struct HistoryRow {
  std::int64_t step = 0;
  double loss = 0;
  std::optional<double> val_psnr;
};

struct TrainResult {
  std::vector<HistoryRow> history;
  std::optional<double> best_val_psnr;
  std::int64_t best_step = 0;
  std::int64_t steps_run = 0;
  bool stopped_early = false;
  PowerMonitor power;  // training steps and validation passes
};

/// One Adam step on the mean loss over `batch`, each image with its own
/// channel, noise and (if adaptive) antenna count drawn from `rng`.
double train_step(Model& model, nn::AdamState& adam, const std::vector<const Image*>& batch, RngStream& rng,
                  const ChannelPlan& plan, PowerMonitor* monitor = nullptr);

/// Trains in place. With validation images and early stopping, the best
/// validated parameters are restored at the end.
TrainResult train(Model& model, const std::vector<Image>& train_set, const std::vector<Image>& val_set,
                  const TrainOptions& options);

struct EvalOptions {
  ChannelPlan plan = ChannelPlan::fixed(10.0);
  Eigen::Index draws = 10;  // channel draws per image
  std::uint64_t seed = 1;
  std::optional<Eigen::Index> antennas;  // defaults to m_max
  std::optional<LinkPath> path;          // defaults to Padded for adaptive models
  harness::PeakMode peak = harness::PeakMode::Fixed;
  unsigned threads = 1;
};

struct EvalStats {
  double mean = 0;
  double stddev = 0;  // population standard deviation over items
  std::vector<double> psnr;  // per item, image-major
  PowerMonitor power;
};

/// Item i = (image i / draws, draw i % draws) uses RngStream(seed, eval stream).derive(i),
/// so results do not depend on the thread count.
EvalStats evaluate_model(const Model& model, const std::vector<Image>& images, const EvalOptions& options);

/// Clamped reconstruction of one image.
Image reconstruct(const Model& model, const Image& image, const LinkDraw& link, LinkPath path);

}  // namespace mimojscc::jscc
