// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mimojscc/baseline/separation.hpp"
#include "mimojscc/harness/config.hpp"
#include "mimojscc/harness/records.hpp"

namespace mimojscc::harness {

/// Images a sweep evaluates: the validation split unless configured otherwise.
std::vector<Image> sweep_images(const ExperimentConfig& config, const Dataset& data);

/// One record per (snr, sigma_e2, M, seed), in that nesting order. Cell
/// (snr, e, M, seed) equals evaluate_model with the same options.
std::vector<TransmissionRecord> run_sweep(const ExperimentConfig& config, const jscc::Model& model,
                                          const std::vector<Image>& images);
/// Checks the checkpoint and data first, then evaluates and writes config.output.
std::vector<TransmissionRecord> run_sweep(const ExperimentConfig& config);

/// Separation bound over (snr, M, seed) with a csir and a csit row per cell,
/// on the same channel draws as the model sweep.
std::vector<TransmissionRecord> run_baseline_sweep(const ExperimentConfig& config, const std::vector<Image>& images,
                                                   const baseline::Codec& codec);
std::vector<TransmissionRecord> run_baseline_sweep(const ExperimentConfig& config);

}  // namespace mimojscc::harness
