// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "mimojscc/channel.hpp"

namespace mimojscc::channel {
namespace {

TEST(SnrConversion, MatchesDefinition) {
  EXPECT_NEAR(snr_to_noise_variance(10.0 * std::log10(2.0), 2), 1.0, 1e-12);
  EXPECT_NEAR(snr_to_noise_variance(3.0103, 2), 1.0, 1e-4);
  EXPECT_DOUBLE_EQ(snr_to_noise_variance(0.0, 2), 2.0);
  EXPECT_NEAR(snr_to_noise_variance(20.0, 4), 0.04, 1e-15);
  for (double snr : {-5.0, 0.0, 7.3, 22.0}) {
    for (Eigen::Index m : {1, 2, 8}) {
      EXPECT_NEAR(noise_variance_to_snr(snr_to_noise_variance(snr, m), m), snr, 1e-12);
    }
  }
}

TEST(SnrConversion, MonteCarloSnrMatchesTwentyDb) {
  RngStream rng(4, 0);
  const Eigen::Index m = 4, k = 8;
  const double sigma_w2 = snr_to_noise_variance(20.0, m);
  double signal = 0, noise = 0;
  for (int block = 0; block < 10000; ++block) {
    const auto ch = sample_channel(rng, m, sigma_w2, 0.0);
    ComplexMatrix x = sample_complex_gaussian(rng, m, k, 1.0);
    x *= std::sqrt(static_cast<double>(m * k)) / x.norm();  // unit power block
    const ComplexMatrix w = sample_noise(rng, m, k, sigma_w2);
    signal += (ch.h * x).squaredNorm();
    noise += w.squaredNorm();
  }
  EXPECT_NEAR(10.0 * std::log10(signal / noise), 20.0, 0.3);
}

TEST(SampleChannel, PerfectEstimateIsBitExact) {
  RngStream rng(1, 0);
  const auto ch = sample_channel(rng, 3, 0.5, 0.0);
  EXPECT_EQ(ch.h_est, ch.h);
  EXPECT_EQ(ch.antennas(), 3);
  RngStream again(1, 0);
  const auto ch2 = sample_channel(again, 3, 0.5, 0.0);
  EXPECT_EQ(ch.h, ch2.h);
}

TEST(SampleChannel, EstimationErrorHasRequestedVarianceAndZeroMean) {
  RngStream rng(8, 0);
  std::complex<double> sum = 0;
  double power = 0;
  std::size_t n = 0;
  for (int i = 0; i < 62500; ++i) {
    const auto ch = sample_channel(rng, 4, 1.0, 1.0);
    const ComplexMatrix e = ch.h - ch.h_est;
    sum += e.sum();
    power += e.squaredNorm();
    n += static_cast<std::size_t>(e.size());
  }
  const double var = power / static_cast<double>(n);
  EXPECT_GE(var, 0.99);
  EXPECT_LE(var, 1.01);
  const double bound = 4.0 * std::sqrt(1.0 / 2.0) / std::sqrt(static_cast<double>(n));
  EXPECT_LT(std::abs(sum.real() / static_cast<double>(n)), bound);
  EXPECT_LT(std::abs(sum.imag() / static_cast<double>(n)), bound);
}

TEST(Transmit, NoiselessAndIdentityChannels) {
  RngStream rng(2, 0);
  const ComplexMatrix x = sample_complex_gaussian(rng, 2, 5, 1.0);
  auto ch = sample_channel(rng, 2, 0.0, 0.0);
  EXPECT_LT((transmit(rng, x, ch) - ch.h * x).norm(), 1e-15);
  ch.h = ComplexMatrix::Identity(2, 2);
  EXPECT_EQ(transmit(rng, x, ch), x);
}

TEST(Transmit, NoiseVarianceMonteCarlo) {
  RngStream rng(3, 0);
  ChannelRealization ch{ComplexMatrix::Zero(2, 2), 1.0, ComplexMatrix::Zero(2, 2), 0.0};
  const ComplexMatrix y = transmit(rng, ComplexMatrix::Zero(2, 500000), ch);
  const double var = y.squaredNorm() / static_cast<double>(y.size());
  EXPECT_GE(var, 0.99);
  EXPECT_LE(var, 1.01);
}

TEST(Transmit, LinearInInputForFixedNoise) {
  RngStream rng(6, 0);
  const auto ch = sample_channel(rng, 3, 0.3, 0.0);
  const ComplexMatrix x1 = sample_complex_gaussian(rng, 3, 4, 1.0);
  const ComplexMatrix x2 = sample_complex_gaussian(rng, 3, 4, 1.0);
  const ComplexMatrix w = sample_noise(rng, 3, 4, ch.sigma_w2);
  const std::complex<double> a(0.7, -0.2), b(-1.1, 0.4);
  const ComplexMatrix lhs = transmit(a * x1 + b * x2, ch, w);
  EXPECT_LT((lhs - (a * ch.h * x1 + b * ch.h * x2 + w)).norm(), 1e-12);
}

TEST(Transmit, RejectsMismatchedShapes) {
  RngStream rng(6, 1);
  const auto ch = sample_channel(rng, 3, 0.3, 0.0);
  EXPECT_THROW(transmit(rng, ComplexMatrix::Zero(2, 4), ch), DimensionError);
  EXPECT_THROW(transmit(ComplexMatrix::Zero(3, 4), ch, ComplexMatrix::Zero(3, 5)), DimensionError);
}

TEST(VerifyPower, SimpleBlocks) {
  EXPECT_EQ(verify_power(ComplexMatrix::Zero(2, 3)), 0.0);
  ComplexMatrix unit(2, 3);
  unit.setConstant(std::polar(1.0, 0.3));
  EXPECT_NEAR(verify_power(unit), 1.0, 1e-15);
}

}  // namespace
}  // namespace mimojscc::channel
