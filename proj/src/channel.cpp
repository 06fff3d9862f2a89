// SPDX-License-Identifier: Apache-2.0
#include "mimojscc/channel.hpp"

#include <cmath>

namespace mimojscc::channel {

double snr_to_noise_variance(double snr_db, Eigen::Index antennas) {
  if (antennas < 1) throw ArgumentError("snr_to_noise_variance: antenna count must be >= 1");
  return static_cast<double>(antennas) * std::pow(10.0, -snr_db / 10.0);
}

double noise_variance_to_snr(double sigma_w2, Eigen::Index antennas) {
  if (antennas < 1) throw ArgumentError("noise_variance_to_snr: antenna count must be >= 1");
  if (!(sigma_w2 > 0.0)) throw ArgumentError("noise_variance_to_snr: noise variance must be positive");
  return 10.0 * std::log10(static_cast<double>(antennas) / sigma_w2);
}

ChannelRealization sample_channel(RngStream& rng, Eigen::Index antennas, double sigma_w2, double sigma_e2) {
  if (antennas < 1) throw ArgumentError("sample_channel: antenna count must be >= 1");
  if (!(sigma_w2 >= 0.0) || !(sigma_e2 >= 0.0)) throw ArgumentError("sample_channel: negative variance");
  ChannelRealization ch;
  ch.h = sample_complex_gaussian(rng, antennas, antennas, 1.0);
  ch.sigma_w2 = sigma_w2;
  ch.sigma_e2 = sigma_e2;
  // The error draw is always consumed so that realizations at different
  // sigma_e2 share the same h for one stream.
  const ComplexMatrix unit_error = sample_complex_gaussian(rng, antennas, antennas, 1.0);
  ch.h_est = sigma_e2 == 0.0 ? ch.h : ComplexMatrix(ch.h + std::sqrt(sigma_e2) * unit_error);
  return ch;
}

ComplexMatrix sample_noise(RngStream& rng, Eigen::Index antennas, Eigen::Index uses, double sigma_w2) {
  return sample_complex_gaussian(rng, antennas, uses, sigma_w2);
}

ComplexMatrix transmit(const SymbolBlock& x, const ChannelRealization& ch, const ComplexMatrix& noise) {
  if (ch.h.rows() != ch.h.cols() || x.rows() != ch.h.cols()) {
    throw DimensionError("transmit: X must have one row per channel input");
  }
  if (noise.rows() != x.rows() || noise.cols() != x.cols()) throw DimensionError("transmit: noise shape");
  return ch.h * x + noise;
}

ComplexMatrix transmit(RngStream& rng, const SymbolBlock& x, const ChannelRealization& ch) {
  if (x.rows() != ch.h.cols()) throw DimensionError("transmit: X must have one row per channel input");
  return transmit(x, ch, sample_noise(rng, x.rows(), x.cols(), ch.sigma_w2));
}

double verify_power(const SymbolBlock& x) {
  if (x.size() == 0) return 0.0;
  return frobenius_norm_sq(x) / static_cast<double>(x.size());
}

}  // namespace mimojscc::channel
