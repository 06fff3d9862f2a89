// SPDX-License-Identifier: Apache-2.0
#include "mimojscc/jscc/train.hpp"

#include <fmt/format.h>

#include <cmath>

#include "mimojscc/nn/ops.hpp"
#include "mimojscc/parallel.hpp"

namespace mimojscc::jscc {
namespace {

void require_image_size(const ModelConfig& c, const Image& image) {
  if (image.height != c.height || image.width != c.width) {
    throw DimensionError(
        fmt::format("image is {}x{}, model expects {}x{}", image.height, image.width, c.height, c.width));
  }
}

LinkPath default_path(const ModelConfig& c) { return c.adaptive_m ? LinkPath::Padded : LinkPath::Fixed; }

}  // namespace

double train_step(Model& model, nn::AdamState& adam, const std::vector<const Image*>& batch, RngStream& rng,
                  const ChannelPlan& plan, PowerMonitor* monitor) {
  const ModelConfig& c = model.config();
  if (batch.empty()) throw ArgumentError("train_step: empty batch");
  validate_plan(plan, c);

  std::vector<nn::Tensor> losses;
  losses.reserve(batch.size());
  for (std::size_t b = 0; b < batch.size(); ++b) {
    require_image_size(c, *batch[b]);
    RngStream item = rng.derive(b + 1);
    const Eigen::Index m = c.adaptive_m ? item.uniform_int(2, c.m_max) : c.m_max;
    const LinkDraw link = draw_link(item, plan, m, c.uses);
    losses.push_back(transmit_image(model, patchify(*batch[b], c.grid), link, default_path(c), monitor).loss);
  }
  const nn::Tensor loss = nn::scale(nn::sum(nn::concat_rows(losses)), 1.0 / static_cast<double>(batch.size()));
  const double value = loss.item();
  if (!std::isfinite(value)) throw NumericError("train_step: loss is not finite");
  nn::backward(loss);
  nn::adam_step(model.params(), adam);
  return value;
}

TrainResult train(Model& model, const std::vector<Image>& train_set, const std::vector<Image>& val_set,
                  const TrainOptions& options) {
  const ModelConfig& c = model.config();
  if (train_set.empty()) throw ArgumentError("train: empty training set");
  if (options.batch < 1 || options.steps < 0) throw ConfigError("train: batch must be positive and steps non-negative");
  const ChannelPlan plan = options.plan.value_or(ChannelPlan{c.snr_train});
  validate_plan(plan, c);

  EvalOptions val_options;
  val_options.plan = plan;
  val_options.plan.snr = SnrRange{plan.snr.mid(), plan.snr.mid()};
  val_options.draws = options.val_draws;
  val_options.seed = options.seed;

  model.params().clear_grad();
  nn::AdamState adam;
  adam.config = options.adam;
  const RngStream base(options.seed, kTrainStream);
  TrainResult result;
  std::optional<nn::ParameterStore> best;
  int stale = 0;

  for (std::int64_t step = 1; step <= options.steps; ++step) {
    RngStream rng = base.derive(static_cast<std::uint64_t>(step));
    std::vector<const Image*> batch;
    batch.reserve(static_cast<std::size_t>(options.batch));
    for (Eigen::Index b = 0; b < options.batch; ++b) {
      batch.push_back(&train_set[static_cast<std::size_t>(rng.uniform_int(0, std::ssize(train_set) - 1))]);
    }
    HistoryRow row{step, train_step(model, adam, batch, rng, plan, &result.power), std::nullopt};
    result.steps_run = step;

    if (options.eval_every > 0 && !val_set.empty() && step % options.eval_every == 0) {
      const EvalStats stats = evaluate_model(model, val_set, val_options);
      result.power.merge(stats.power);
      const double val = stats.mean;
      row.val_psnr = val;
      if (!result.best_val_psnr || val >= *result.best_val_psnr + options.min_delta_db) {
        result.best_val_psnr = val;
        result.best_step = step;
        best = model.params().clone();
        stale = 0;
      } else {
        ++stale;
      }
    }
    result.history.push_back(row);
    if (options.early_stopping && stale >= options.patience) {
      result.stopped_early = true;
      break;
    }
  }
  if (options.early_stopping && best) model.params().assign_from(*best);
  return result;
}

Image reconstruct(const Model& model, const Image& image, const LinkDraw& link, LinkPath path) {
  const ModelConfig& c = model.config();
  require_image_size(c, image);
  const auto out = transmit_image(model, patchify(image, c.grid), link, path);
  return clamp_unit(unpatchify(out.reconstruction.value(), c.height, c.width, c.grid));
}

EvalStats evaluate_model(const Model& model, const std::vector<Image>& images, const EvalOptions& options) {
  const ModelConfig& c = model.config();
  if (images.empty()) throw ArgumentError("evaluate_model: no images");
  if (options.draws < 1) throw ConfigError("evaluate_model: need at least one channel draw per image");
  validate_plan(options.plan, c);
  const Eigen::Index antennas = options.antennas.value_or(c.m_max);
  const LinkPath path = options.path.value_or(default_path(c));
  if (antennas != c.m_max && !c.adaptive_m) {
    throw ConfigError(fmt::format("model was trained for {} antennas only", c.m_max));
  }

  const Model frozen = model.frozen();
  const std::size_t items = images.size() * static_cast<std::size_t>(options.draws);
  std::vector<double> psnr(items);
  std::vector<double> power(items);
  const RngStream base(options.seed, kEvalStream);

  auto run_item = [&](std::size_t i) {
    const Image& image = images[i / static_cast<std::size_t>(options.draws)];
    RngStream rng = base.derive(i);
    const LinkDraw link = draw_link(rng, options.plan, antennas, c.uses);
    require_image_size(c, image);
    const auto out = transmit_image(frozen, patchify(image, c.grid), link, path);
    const Image estimate = clamp_unit(unpatchify(out.reconstruction.value(), c.height, c.width, c.grid));
    psnr[i] = harness::psnr(image, estimate, options.peak);
    power[i] = out.tx_power;
  };

  parallel_for(items, options.threads, run_item);

  EvalStats stats;
  double sum = 0;
  for (std::size_t i = 0; i < items; ++i) {
    sum += psnr[i];
    stats.power.record(power[i]);
  }
  stats.mean = sum / static_cast<double>(items);
  double var = 0;
  for (double v : psnr) var += (v - stats.mean) * (v - stats.mean);
  stats.stddev = std::sqrt(var / static_cast<double>(items));
  stats.psnr = std::move(psnr);
  return stats;
}

}  // namespace mimojscc::jscc
