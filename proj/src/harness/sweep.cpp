// SPDX-License-Identifier: Apache-2.0
#include "mimojscc/harness/sweep.hpp"

#include <fmt/format.h>

#include <cmath>

#include "mimojscc/parallel.hpp"

namespace mimojscc::harness {
namespace {

struct Cell {
  double snr_db;
  double sigma_e2;
  Eigen::Index antennas;
  std::uint64_t seed;
};

std::vector<Cell> model_cells(const ExperimentConfig& c) {
  std::vector<Cell> cells;
  for (double snr : c.sweep.snr_db) {
    for (double e : c.sweep.sigma_e2) {
      for (auto m : c.sweep_antennas()) {
        for (auto seed : c.seeds) cells.push_back({snr, e, m, seed});
      }
    }
  }
  return cells;
}

std::pair<double, double> mean_std(const std::vector<double>& v) {
  double sum = 0;
  for (double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  double var = 0;
  for (double x : v) var += (x - mean) * (x - mean);
  return {mean, std::sqrt(var / static_cast<double>(v.size()))};
}

}  // namespace

std::vector<Image> sweep_images(const ExperimentConfig& config, const Dataset& data) {
  if (!config.data.sweep_on_validation) return data.images;
  auto split = split_dataset(data);
  if (split.validation.empty()) throw ConfigError("validation split is empty; use more images or sweep_split = all");
  return std::move(split.validation);
}

std::vector<TransmissionRecord> run_sweep(const ExperimentConfig& config, const jscc::Model& model,
                                          const std::vector<Image>& images) {
  const auto cells = model_cells(config);
  std::vector<TransmissionRecord> records(cells.size());
  const jscc::Model frozen = model.frozen();
  parallel_for(cells.size(), config.sweep.threads, [&](std::size_t i) {
    const Cell& cell = cells[i];
    jscc::EvalOptions options;
    options.plan = jscc::ChannelPlan::fixed(cell.snr_db, cell.sigma_e2);
    options.plan.allow_csit_error = config.sweep.allow_csit_error;
    options.draws = config.sweep.draws;
    options.seed = cell.seed;
    options.antennas = cell.antennas;
    options.peak = config.sweep.peak;
    const auto stats = jscc::evaluate_model(frozen, images, options);
    records[i] = TransmissionRecord{config.model.mode, cell.snr_db,  config.bandwidth_ratio,
                                    cell.antennas,     cell.sigma_e2, cell.seed,
                                    stats.mean,        stats.stddev, images.size(),
                                    static_cast<std::size_t>(config.sweep.draws), config.sweep.model_id};
  });
  return records;
}

std::vector<TransmissionRecord> run_sweep(const ExperimentConfig& config) {
  if (!std::filesystem::is_regular_file(config.sweep.checkpoint)) {
    throw ConfigError(fmt::format("checkpoint {} does not exist", config.sweep.checkpoint.string()));
  }
  const jscc::Model model = jscc::load_model(config.model, config.sweep.checkpoint);
  const auto images = sweep_images(config, load_dataset(config));
  auto records = run_sweep(config, model, images);
  write_records(config.output, records);
  return records;
}

std::vector<TransmissionRecord> run_baseline_sweep(const ExperimentConfig& config, const std::vector<Image>& images,
                                                   const baseline::Codec& codec) {
  if (images.empty()) throw ArgumentError("baseline sweep: no images");
  std::vector<std::vector<baseline::RdPoint>> curves(images.size());
  parallel_for(images.size(), config.sweep.threads, [&](std::size_t i) { curves[i] = codec.rd_curve(images[i]); });

  std::vector<Cell> cells;
  for (double snr : config.sweep.snr_db) {
    for (auto m : config.sweep_antennas()) {
      for (auto seed : config.seeds) cells.push_back({snr, 0.0, m, seed});
    }
  }
  const auto draws = static_cast<std::size_t>(config.sweep.draws);
  const std::string model_id = "separation:" + codec.name();
  std::vector<TransmissionRecord> records(2 * cells.size());
  parallel_for(cells.size(), config.sweep.threads, [&](std::size_t c) {
    const Cell& cell = cells[c];
    const RngStream base(cell.seed, jscc::kEvalStream);
    const auto plan = jscc::ChannelPlan::fixed(cell.snr_db);
    std::vector<double> csir, csit;
    for (std::size_t i = 0; i < images.size() * draws; ++i) {
      RngStream rng = base.derive(i);
      const auto link = jscc::draw_link(rng, plan, cell.antennas, config.model.uses);
      const Image& image = images[i / draws];
      csir.push_back(baseline::separation_bound(image, link.ch, config.bandwidth_ratio, frontend::CsiMode::Csir,
                                                curves[i / draws]).psnr_db);
      csit.push_back(baseline::separation_bound(image, link.ch, config.bandwidth_ratio, frontend::CsiMode::Csit,
                                                curves[i / draws]).psnr_db);
    }
    for (auto [slot, mode, values] : {std::tuple{2 * c, frontend::CsiMode::Csir, &csir},
                                      std::tuple{2 * c + 1, frontend::CsiMode::Csit, &csit}}) {
      const auto [mean, stddev] = mean_std(*values);
      records[slot] = TransmissionRecord{mode, cell.snr_db, config.bandwidth_ratio, cell.antennas, 0.0, cell.seed,
                                         mean, stddev, images.size(), draws, model_id};
    }
  });
  return records;
}

std::vector<TransmissionRecord> run_baseline_sweep(const ExperimentConfig& config) {
  const auto images = sweep_images(config, load_dataset(config));
  std::vector<TransmissionRecord> records;
  const baseline::ToyDctCodec toy;
  if (config.baseline.codec == BaselineConfig::Kind::Toy) {
    records = run_baseline_sweep(config, images, toy);
  } else {
    const baseline::ExternalCodec external(config.baseline.external);
    if (config.baseline.include_toy) {
      records = run_baseline_sweep(config, images, baseline::CombinedCodec({&external, &toy}));
    } else {
      records = run_baseline_sweep(config, images, external);
    }
  }
  write_records(config.output, records);
  return records;
}

}  // namespace mimojscc::harness
