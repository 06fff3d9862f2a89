// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "mimojscc/channel.hpp"
#include "mimojscc/jscc/model.hpp"

namespace mimojscc::jscc {

/// Tolerance on the per-block average symbol power.
inline constexpr double kPowerTolerance = 1e-6;

/// l x (2Mk / l) real tokens -> complex M x k block.
channel::SymbolBlock pack_symbols(const Eigen::Ref<const RowMatrix>& z, Eigen::Index antennas, Eigen::Index uses);
/// Inverse of pack_symbols.
RowMatrix unpack_symbols(const channel::SymbolBlock& x, Eigen::Index tokens);
/// Packs z and scales it to unit average power; zero stays zero.
channel::SymbolBlock power_normalize(const Eigen::Ref<const RowMatrix>& z, Eigen::Index antennas, Eigen::Index uses);

/// How channels are drawn for a transmission.
struct ChannelPlan {
  SnrRange snr{};
  double sigma_e2 = 0;
  bool identity_channel = false;  // H = I instead of Rayleigh
  bool noiseless = false;         // sigma_w2 = 0 regardless of snr
  /// Closed loop with a corrupted estimate is refused unless set.
  bool allow_csit_error = false;

  static ChannelPlan fixed(double snr_db, double sigma_e2 = 0) { return {{snr_db, snr_db}, sigma_e2}; }
};

/// Throws ConfigError for combinations the model cannot run.
void validate_plan(const ChannelPlan& plan, const ModelConfig& config);

/// Channel, noise and SNR for one image.
struct LinkDraw {
  channel::ChannelRealization ch;
  ComplexMatrix noise;  // M x k
  double snr_db = 0;
};

/// Consumes, in order: one SNR draw, the channel (gains then estimation
/// error), the noise block.
LinkDraw draw_link(RngStream& rng, const ChannelPlan& plan, Eigen::Index antennas, Eigen::Index uses);

/// Counts power checks on transmitted blocks.
struct PowerMonitor {
  std::int64_t checks = 0;
  std::int64_t violations = 0;
  double max_deviation = 0;

  void record(double power);
  void merge(const PowerMonitor& other);
};

/// Fixed sends all m_max antennas; Padded sends the first M rows and the
/// receiver zero-pads back to m_max.
enum class LinkPath { Fixed, Padded };

struct LinkOutput {
  nn::Tensor reconstruction;  // l x c patch estimates, unclamped
  nn::Tensor loss;            // MSE against the source patches
  double tx_power = 0;        // verify_power of the transmitted block
};

/// End-to-end differentiable transmission of one patchified image over `link`
/// with link.ch.antennas() active antennas.
LinkOutput transmit_image(const Model& model, const RowMatrix& patches, const LinkDraw& link, LinkPath path,
                          PowerMonitor* monitor = nullptr);

}  // namespace mimojscc::jscc
