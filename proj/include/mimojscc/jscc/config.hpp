// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "mimojscc/frontend.hpp"

namespace mimojscc::jscc {

using frontend::CsiMode;

/// Open-loop receive chain. Closed loop always uses SVD equalization.
enum class Equalizer {
  DlZf,  // zero-forcing plus learned residual compensation
  Zf,
  Mmse,
};

std::string_view to_string(Equalizer eq);
Equalizer parse_equalizer(std::string_view text);

/// Training SNR in dB; lo == hi means a fixed SNR.
struct SnrRange {
  double lo = 10.0;
  double hi = 10.0;
  bool fixed() const { return lo == hi; }
  double mid() const { return 0.5 * (lo + hi); }
};

struct ModelConfig {
  CsiMode mode = CsiMode::Csir;
  Equalizer equalizer = Equalizer::DlZf;
  Eigen::Index m_max = 2;          // antennas (the maximum when adaptive_m)
  Eigen::Index uses = 16;          // k, channel uses per image
  Eigen::Index grid = 2;           // p, patch grid side; l = p^2
  Eigen::Index height = 8;
  Eigen::Index width = 8;
  Eigen::Index dim = 32;           // d
  Eigen::Index heads = 2;          // N_s
  Eigen::Index depth = 2;          // L_t
  Eigen::Index mlp_hidden = 64;
  Eigen::Index residual_hidden = 128;
  SnrRange snr_train{};
  bool adaptive_m = false;
  double sentinel = frontend::kUnusableSubchannel;
  /// Under CSIT, whether precoder and heatmap use the estimate (true) or the true channel.
  bool csit_uses_estimate = true;

  Eigen::Index tokens() const { return grid * grid; }
  Eigen::Index patch_dim() const { return 3 * height * width / tokens(); }
  Eigen::Index token_width() const { return 2 * m_max * uses / tokens(); }
  Eigen::Index encoder_input_dim() const {
    return mode == CsiMode::Csit ? patch_dim() + token_width() : patch_dim();
  }
  Eigen::Index source_symbols() const { return 3 * height * width; }
  double bandwidth_ratio() const {
    return static_cast<double>(uses) / static_cast<double>(source_symbols());
  }
  bool uses_residual() const { return mode == CsiMode::Csir && equalizer == Equalizer::DlZf; }

  /// Throws ConfigError unless every derived size is integral and consistent.
  void validate() const;

  /// h = w = 8, p = 2, d = 32, L_t = 2, N_s = 2, M = 2, k = 16 (R = 1/12).
  static ModelConfig tiny();
  /// 32 x 32 images, p = 8, d = 256, L_t = 8, N_s = 8, M = 2, R = 1/12.
  static ModelConfig full();
  static ModelConfig profile(std::string_view name);
};

/// k = R * 3hw, rejecting ratios that do not give an integral k.
Eigen::Index uses_for_ratio(double ratio, Eigen::Index height, Eigen::Index width);

}  // namespace mimojscc::jscc
