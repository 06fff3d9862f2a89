// SPDX-License-Identifier: Apache-2.0
#include "mimojscc/harness/metrics.hpp"

#include <fmt/format.h>

#include <cmath>

namespace mimojscc::harness {

std::string_view to_string(PeakMode mode) { return mode == PeakMode::Fixed ? "fixed" : "per_image"; }

PeakMode parse_peak_mode(std::string_view text) {
  if (text == "fixed") return PeakMode::Fixed;
  if (text == "per_image") return PeakMode::PerImage;
  throw ConfigError(fmt::format("unknown psnr_peak '{}' (expected fixed or per_image)", text));
}

double mse(const Image& reference, const Image& estimate) {
  if (reference.height != estimate.height || reference.width != estimate.width) {
    throw DimensionError("mse: image sizes differ");
  }
  return (reference.pixels - estimate.pixels).square().mean();
}

double psnr_from_mse(double mse, double peak) {
  if (!(peak > 0.0)) throw ArgumentError("psnr: peak must be positive");
  if (mse <= 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(peak * peak / mse));
}

double psnr(const Image& reference, const Image& estimate, double peak) {
  return psnr_from_mse(mse(reference, estimate), peak);
}

double psnr(const Image& reference, const Image& estimate, PeakMode mode) {
  const double peak = mode == PeakMode::Fixed ? 1.0 : reference.pixels.abs().maxCoeff();
  return psnr(reference, estimate, peak > 0.0 ? peak : 1.0);
}

}  // namespace mimojscc::harness
