// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

#include "mimojscc/image.hpp"

namespace mimojscc::harness {

/// PSNR reported when the reconstruction is exact.
inline constexpr double kPsnrCap = 100.0;

enum class PeakMode { Fixed, PerImage };

std::string_view to_string(PeakMode mode);
PeakMode parse_peak_mode(std::string_view text);

double mse(const Image& reference, const Image& estimate);
/// 10 log10(peak^2 / MSE), capped at 100 dB.
double psnr_from_mse(double mse, double peak = 1.0);
double psnr(const Image& reference, const Image& estimate, double peak = 1.0);
/// Peak 1.0, or the reference's largest absolute pixel value.
double psnr(const Image& reference, const Image& estimate, PeakMode mode);

}  // namespace mimojscc::harness
