// SPDX-License-Identifier: Apache-2.0
#include "mimojscc/baseline/separation.hpp"

#include "mimojscc/harness/metrics.hpp"
#include "mimojscc/jscc/config.hpp"

namespace mimojscc::baseline {

double floor_psnr(const Image& image) {
  Image mean_color(image.height, image.width);
  const Eigen::Index pixels = image.height * image.width;
  for (Eigen::Index c = 0; c < 3; ++c) {
    double sum = 0;
    for (Eigen::Index i = 0; i < pixels; ++i) sum += image.pixels(3 * i + c);
    for (Eigen::Index i = 0; i < pixels; ++i) mean_color.pixels(3 * i + c) = sum / static_cast<double>(pixels);
  }
  return harness::psnr(image, mean_color);
}

SeparationResult separation_bound(const Image& image, const channel::ChannelRealization& ch, double ratio,
                                  frontend::CsiMode mode, const std::vector<RdPoint>& curve) {
  const auto uses = jscc::uses_for_ratio(ratio, image.height, image.width);
  SeparationResult out;
  if (mode == frontend::CsiMode::Csir) {
    out.capacity = frontend::capacity_open_loop(ch.h, ch.sigma_w2);
  } else {
    const RealVector s = complex_svd(ch.h).s;
    out.capacity = s.maxCoeff() > 0.0 ? frontend::capacity_closed_loop(s, ch.sigma_w2) : 0.0;
  }
  out.budget_bpp = static_cast<double>(uses) * out.capacity / static_cast<double>(image.height * image.width);

  const double floor = floor_psnr(image);
  out.psnr_db = floor;
  out.used_floor = true;
  for (const auto& p : curve) {
    if (p.bpp > out.budget_bpp) break;
    if (p.psnr_db >= floor) {
      out.psnr_db = p.psnr_db;
      out.used_floor = false;
    }
  }
  return out;
}

double separation_bound_psnr(const Image& image, const channel::ChannelRealization& ch, double ratio,
                             frontend::CsiMode mode, const Codec& codec) {
  return separation_bound(image, ch, ratio, mode, codec.rd_curve(image)).psnr_db;
}

}  // namespace mimojscc::baseline
