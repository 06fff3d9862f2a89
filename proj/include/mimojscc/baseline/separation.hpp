// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mimojscc/baseline/codec.hpp"
#include "mimojscc/channel.hpp"
#include "mimojscc/frontend.hpp"

namespace mimojscc::baseline {

/// PSNR of the per-channel mean-color reconstruction, the zero-rate limit.
double floor_psnr(const Image& image);

struct SeparationResult {
  double capacity = 0;    // bits per channel use
  double budget_bpp = 0;  // k C / (h w)
  double psnr_db = 0;
  bool used_floor = false;
};

/// Capacity-achieving channel code plus the best codec rate that fits:
/// C from the open-loop (csir) or water-filled (csit) capacity of ch.h.
SeparationResult separation_bound(const Image& image, const channel::ChannelRealization& ch, double ratio,
                                  frontend::CsiMode mode, const std::vector<RdPoint>& curve);
double separation_bound_psnr(const Image& image, const channel::ChannelRealization& ch, double ratio,
                             frontend::CsiMode mode, const Codec& codec);

}  // namespace mimojscc::baseline
