// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mimojscc/linalg.hpp"

namespace mimojscc::channel {

/// Block of M x k complex channel symbols (one antenna per row).
using SymbolBlock = ComplexMatrix;

/// One slow block-fading realization, held for a whole image.
struct ChannelRealization {
  ComplexMatrix h;      // true gains, CN(0, 1) entries
  double sigma_w2 = 0;  // noise variance per complex entry
  ComplexMatrix h_est;  // what the transceivers see; equals h when sigma_e2 == 0
  double sigma_e2 = 0;

  Eigen::Index antennas() const { return h.rows(); }
};

/// sigma_w^2 = M * 10^(-snr/10), so that snr = 10 log10(E||HX||^2 / E||W||^2)
/// for unit-power X and unit-variance H.
double snr_to_noise_variance(double snr_db, Eigen::Index antennas);
double noise_variance_to_snr(double sigma_w2, Eigen::Index antennas);

ChannelRealization sample_channel(RngStream& rng, Eigen::Index antennas, double sigma_w2, double sigma_e2);

ComplexMatrix sample_noise(RngStream& rng, Eigen::Index antennas, Eigen::Index uses, double sigma_w2);

/// Y = H X + W with W drawn from `rng`.
ComplexMatrix transmit(RngStream& rng, const SymbolBlock& x, const ChannelRealization& ch);
/// Y = H X + W with a caller-supplied noise draw.
ComplexMatrix transmit(const SymbolBlock& x, const ChannelRealization& ch, const ComplexMatrix& noise);

/// Average symbol power (1 / (M k)) ||X||_F^2.
double verify_power(const SymbolBlock& x);

}  // namespace mimojscc::channel
