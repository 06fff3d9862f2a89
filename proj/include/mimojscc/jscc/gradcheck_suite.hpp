// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "mimojscc/jscc/config.hpp"
#include "mimojscc/nn/gradcheck.hpp"

namespace mimojscc::jscc {

inline constexpr double kGradCheckTolerance = 1e-5;

struct GradCheckCase {
  std::string name;
  nn::GradCheckResult result;
  bool passed = false;
};

struct GradCheckSuiteOptions {
  nn::GradCheckOptions check{.coords_per_param = 16};
  std::uint64_t seed = 1;
  double snr_db = 10.0;
  double tolerance = kGradCheckTolerance;
};

/// Finite-difference checks of the full link loss on one synthetic image:
/// open loop with the residual equalizer, closed loop, a noiseless open loop
/// and an adaptive-antenna transmission on 2 of m_max antennas (m_max = 4
/// when the profile has only 2, sentinel 1).
std::vector<GradCheckCase> run_gradcheck_suite(const ModelConfig& profile, const GradCheckSuiteOptions& options = {});

}  // namespace mimojscc::jscc
