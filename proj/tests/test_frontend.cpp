// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "mimojscc/channel.hpp"
#include "mimojscc/frontend.hpp"
#include "mimojscc/symbol_layout.hpp"

namespace mimojscc::frontend {
namespace {

using C = std::complex<double>;

ComplexMatrix diag2(double a, double b) {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = a;
  h(1, 1) = b;
  return h;
}

// Sorted active-set solution: try the strongest n subchannels for decreasing n.
RealVector water_filling_sorted(const RealVector& s, double sigma_w2, double p_total, double* level) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(s.size()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return s(a) > s(b); });
  std::size_t usable = 0;
  while (usable < order.size() && s(order[usable]) > 0.0) ++usable;
  RealVector p = RealVector::Zero(s.size());
  for (std::size_t n = usable; n >= 1; --n) {
    double sum_floor = 0;
    for (std::size_t i = 0; i < n; ++i) sum_floor += sigma_w2 / (s(order[i]) * s(order[i]));
    const double mu = (p_total + sum_floor) / static_cast<double>(n);
    const double weakest = sigma_w2 / (s(order[n - 1]) * s(order[n - 1]));
    if (mu > weakest) {
      for (std::size_t i = 0; i < n; ++i) p(order[i]) = mu - sigma_w2 / (s(order[i]) * s(order[i]));
      *level = mu;
      return p;
    }
  }
  return p;
}

// Plain bisection on the water level with no final active-set correction.
double water_level_bisection(const RealVector& s, double sigma_w2, double p_total) {
  double lo = 0, hi = p_total;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > 0) hi = std::max(hi, p_total + sigma_w2 / (s(i) * s(i)));
  }
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    double poured = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s(i) > 0) poured += std::max(0.0, mid - sigma_w2 / (s(i) * s(i)));
    }
    (poured > p_total ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

TEST(ZeroForcing, DiagonalExample) {
  const ComplexMatrix g = zf_matrix(diag2(1, 2));
  EXPECT_LT((g - diag2(1, 0.5)).norm(), 1e-14);
}

TEST(ZeroForcing, InvertsRandomChannels) {
  RngStream rng(12, 0);
  for (int i = 0; i < 50; ++i) {
    const auto n = static_cast<Eigen::Index>(1 + i % 8);
    const ComplexMatrix h = sample_complex_gaussian(rng, n, n, 1.0);
    EXPECT_LT((zf_matrix(h) * h - ComplexMatrix::Identity(n, n)).norm(), 1e-8);
  }
}

TEST(ZeroForcing, RejectsSingularChannels) {
  EXPECT_THROW(zf_matrix(diag2(1, 0)), IllConditionedError);
  EXPECT_THROW(zf_matrix(ComplexMatrix::Zero(2, 2)), IllConditionedError);
  EXPECT_THROW(zf_matrix(ComplexMatrix::Zero(2, 3)), DimensionError);
}

TEST(Mmse, DiagonalExampleAndLimits) {
  const ComplexMatrix g = mmse_matrix(diag2(1, 2), 1.0);
  EXPECT_LT((g - diag2(0.5, 0.4)).norm(), 1e-14);
  RngStream rng(2, 0);
  const ComplexMatrix h = sample_complex_gaussian(rng, 3, 3, 1.0);
  EXPECT_LT((mmse_matrix(h, 0.0) - zf_matrix(h)).norm(), 1e-8);
  EXPECT_NO_THROW(mmse_matrix(ComplexMatrix::Zero(2, 2), 1.0));
}

TEST(SvdPrecoding, NoiselessRoundTripIsIdentity) {
  RngStream rng(3, 0);
  for (Eigen::Index m = 2; m <= 4; ++m) {
    const ComplexMatrix h = sample_complex_gaussian(rng, m, m, 1.0);
    const ComplexMatrix x = sample_complex_gaussian(rng, m, 6, 1.0);
    const auto f = complex_svd(h);
    const ComplexMatrix out = svd_equalize(h * svd_precode(x, f.v), f);
    EXPECT_LT((out - x).norm(), 1e-8);
  }
}

TEST(SvdEqualizer, DeadSubchannelIsZeroed) {
  const auto f = complex_svd(diag2(2, 0));
  const ComplexMatrix g = svd_equalizer_matrix(f);
  EXPECT_EQ(g.row(1).norm(), 0.0);
  EXPECT_NEAR(std::abs(g(0, 0)), 0.5, 1e-15);
}

TEST(NoisePower, ClosedFormExamples) {
  const RealVector zf = noise_power_csir(diag2(1, 2), 0.5);
  EXPECT_NEAR(zf(0), 0.5, 1e-15);
  EXPECT_NEAR(zf(1), 0.125, 1e-15);

  RealVector s(2);
  s << 2, 1;
  const RealVector svd = noise_power_csit(s, 0.5);
  EXPECT_NEAR(svd(0), 0.125, 1e-15);
  EXPECT_NEAR(svd(1), 0.5, 1e-15);

  s << 2, 0;
  EXPECT_EQ(noise_power_csit(s, 0.5)(1), kUnusableSubchannel);
  EXPECT_EQ(noise_power_csit(s, 0.5, kPinvTolerance, 7.0)(1), 7.0);
}

// Empirical per-row variance of G W for white W, split into real and imaginary parts.
void expect_monte_carlo_match(const ComplexMatrix& g, double sigma_w2, const RealVector& predicted) {
  RngStream rng(99, 0);
  const Eigen::Index draws = 200000;
  const ComplexMatrix w = channel::sample_noise(rng, g.cols(), draws, sigma_w2);
  const ComplexMatrix out = g * w;
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    const double re = out.row(i).real().squaredNorm() / static_cast<double>(draws);
    const double im = out.row(i).imag().squaredNorm() / static_cast<double>(draws);
    EXPECT_NEAR(re / (predicted(i) / 2), 1.0, 0.03);
    EXPECT_NEAR(im / (predicted(i) / 2), 1.0, 0.03);
  }
}

TEST(NoisePower, MonteCarloZeroForcing) {
  const ComplexMatrix h = diag2(1, 2);
  expect_monte_carlo_match(zf_matrix(h), 0.5, noise_power_csir(h, 0.5));
  RngStream rng(5, 5);
  const ComplexMatrix r = sample_complex_gaussian(rng, 3, 3, 1.0);
  expect_monte_carlo_match(zf_matrix(r), 0.2, noise_power_csir(r, 0.2));
}

TEST(NoisePower, MonteCarloSvd) {
  RngStream rng(5, 6);
  const ComplexMatrix h = sample_complex_gaussian(rng, 3, 3, 1.0);
  const auto f = complex_svd(h);
  expect_monte_carlo_match(svd_equalizer_matrix(f), 0.3, noise_power_csit(f.s, 0.3));
}

TEST(NoisePower, MonteCarloMmse) {
  RngStream rng(5, 7);
  const ComplexMatrix h = sample_complex_gaussian(rng, 2, 2, 1.0);
  const ComplexMatrix g = mmse_matrix(h, 0.4);
  expect_monte_carlo_match(g, 0.4, noise_power_linear(g, 0.4));
}

TEST(Heatmap, SingleAntennaSingleToken) {
  RealVector np(1);
  np << 0.4;
  const Heatmap hm = build_heatmap(np, 1, 2);
  ASSERT_EQ(hm.values.rows(), 1);
  ASSERT_EQ(hm.values.cols(), 4);
  for (Eigen::Index j = 0; j < 4; ++j) EXPECT_DOUBLE_EQ(hm.values(0, j), 0.2);
}

TEST(Heatmap, AlignsWithSymbolLayout) {
  RealVector np(2);
  np << 1.0, 3.0;
  const Eigen::Index k = 4, l = 4;
  const Heatmap hm = build_heatmap(np, l, k);
  ComplexMatrix x(2, k);
  for (Eigen::Index a = 0; a < 2; ++a) {
    for (Eigen::Index u = 0; u < k; ++u) x(a, u) = C(np(a) / 2, np(a) / 2);
  }
  EXPECT_EQ(hm.values, grid_to_tokens(complex_to_grid(x), l));
  EXPECT_THROW(build_heatmap(np, 3, k), ConfigError);
}

TEST(WaterFilling, WorkedExamples) {
  RealVector s(2);
  s << 2, 1;
  const auto a = water_filling(s, 1.0, 2.0);
  EXPECT_NEAR(a.p(0), 1.375, 1e-12);
  EXPECT_NEAR(a.p(1), 0.625, 1e-12);
  EXPECT_NEAR(a.water_level, 1.625, 1e-12);

  s << 10, 0.01;
  const auto b = water_filling(s, 1.0, 0.1);
  EXPECT_NEAR(b.p(0), 0.1, 1e-12);
  EXPECT_EQ(b.p(1), 0.0);

  s << 2, 0;
  const auto c = water_filling(s, 1.0, 2.0);
  EXPECT_NEAR(c.p(0), 2.0, 1e-12);
  EXPECT_EQ(c.p(1), 0.0);

  s << 0, 0;
  EXPECT_THROW(water_filling(s, 1.0, 2.0), ArgumentError);
  s << 1, 1;
  EXPECT_THROW(water_filling(s, 1.0, 0.0), ArgumentError);
}

TEST(WaterFilling, MatchesOraclesAndKkt) {
  RngStream rng(31, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto m = static_cast<Eigen::Index>(2 + trial % 7);
    const ComplexMatrix h = sample_complex_gaussian(rng, m, m, 1.0);
    const RealVector s = complex_svd(h).s;
    const double sigma_w2 = std::pow(10.0, rng.uniform(-2.0, 1.0));
    const double p_total = static_cast<double>(m) * rng.uniform(0.1, 2.0);
    const auto a = water_filling(s, sigma_w2, p_total);

    double mu_sorted = 0;
    const RealVector oracle = water_filling_sorted(s, sigma_w2, p_total, &mu_sorted);
    EXPECT_LT((a.p - oracle).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_NEAR(a.water_level, water_level_bisection(s, sigma_w2, p_total), 1e-9);

    EXPECT_NEAR(a.p.sum(), p_total, 1e-9);
    for (Eigen::Index i = 0; i < m; ++i) {
      EXPECT_GE(a.p(i), 0.0);
      const double floor_i = sigma_w2 / (s(i) * s(i));
      if (a.p(i) > 0) {
        EXPECT_NEAR(a.p(i) + floor_i, a.water_level, 1e-9);
      } else {
        EXPECT_GE(floor_i, a.water_level - 1e-9);
      }
    }
  }
}

TEST(Capacity, WorkedExamples) {
  EXPECT_NEAR(capacity_open_loop(diag2(2, 1), 1.0), std::log2(5.0) + 1.0, 1e-12);
  RealVector s(2);
  s << 2, 1;
  // Water-filled powers (1.375, 0.625) give log2(1 + 5.5) + log2(1 + 0.625).
  const double closed = std::log2(1.0 + 1.375 * 4.0) + std::log2(1.0 + 0.625);
  EXPECT_NEAR(capacity_closed_loop(s, 1.0), closed, 1e-12);
  EXPECT_NEAR(capacity_closed_loop(s, 1.0), 3.40088, 1e-5);
  EXPECT_EQ(capacity_open_loop(ComplexMatrix::Zero(2, 2), 1.0), 0.0);
}

TEST(Capacity, ClosedLoopNeverBelowOpenLoop) {
  RngStream rng(17, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto m = static_cast<Eigen::Index>(2 + trial % 3);
    const ComplexMatrix h = sample_complex_gaussian(rng, m, m, 1.0);
    const double sigma_w2 = std::pow(10.0, rng.uniform(-2.0, 1.0));
    const RealVector s = complex_svd(h).s;
    EXPECT_GE(capacity_closed_loop(s, sigma_w2), capacity_open_loop(h, sigma_w2) - 1e-12);
  }
  RealVector equal = RealVector::Constant(3, 1.7);
  EXPECT_NEAR(capacity_closed_loop(equal, 0.3), capacity_open_loop_from_singular_values(equal, 0.3), 1e-12);
}

TEST(CsiModeNames, RoundTrip) {
  EXPECT_EQ(parse_csi_mode(to_string(CsiMode::Csir)), CsiMode::Csir);
  EXPECT_EQ(parse_csi_mode(to_string(CsiMode::Csit)), CsiMode::Csit);
  EXPECT_THROW(parse_csi_mode("open"), ConfigError);
}

}  // namespace
}  // namespace mimojscc::frontend
