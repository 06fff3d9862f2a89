// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "mimojscc/baseline/codec.hpp"
#include "mimojscc/baseline/separation.hpp"
#include "mimojscc/channel.hpp"
#include "mimojscc/harness/dataset.hpp"
#include "mimojscc/harness/metrics.hpp"

namespace mimojscc::baseline {
namespace {

using frontend::CsiMode;

Image constant_image(Eigen::Index h, Eigen::Index w, double v) {
  Image img(h, w);
  img.pixels.setConstant(v);
  return img;
}

Image synth(Eigen::Index side, std::size_t index = 0) {
  return harness::synth_dataset(index + 1, side, side, 7).images[index];
}

channel::ChannelRealization identity_channel(double sigma_w2) {
  return {ComplexMatrix::Identity(2, 2), sigma_w2, ComplexMatrix::Identity(2, 2), 0.0};
}

void expect_monotone(const std::vector<RdPoint>& curve) {
  ASSERT_FALSE(curve.empty());
  for (std::size_t i = 1; i < curve.size(); ++i) {
    EXPECT_GT(curve[i].bpp, curve[i - 1].bpp);
    EXPECT_GE(curve[i].psnr_db, curve[i - 1].psnr_db);
  }
}

TEST(ToyDct, LadderRates) {
  EXPECT_DOUBLE_EQ((DctRung{4, 4}).bpp(), 0.75);
  EXPECT_DOUBLE_EQ((DctRung{64, 8}).bpp(), 24.0);
  EXPECT_EQ(default_ladder().size(), 21u);
}

TEST(ToyDct, ConstantImageIsNearlyLossless) {
  const Image img = constant_image(16, 16, 0.5);
  const auto curve = ToyDctCodec().rd_curve(img);
  expect_monotone(curve);
  EXPECT_GE(curve.back().psnr_db, 50.0);
}

TEST(ToyDct, CurvesAreMonotoneAndApproachLossless) {
  for (std::size_t i = 0; i < 3; ++i) {
    const Image img = synth(32, i);
    const auto curve = ToyDctCodec().rd_curve(img);
    expect_monotone(curve);
    const Image best = ToyDctCodec().reconstruct(img, {64, 8});
    EXPECT_GE(harness::psnr(img, best), 35.0);
  }
  EXPECT_THROW(ToyDctCodec().rd_curve(constant_image(12, 16, 0.5)), Error);
}

TEST(UpperEnvelope, SortsDedupesAndTakesRunningMax) {
  const auto env = upper_envelope({{1.0, 20}, {0.5, 25}, {1.0, 22}, {2.0, 24}, {0.25, 10}});
  ASSERT_EQ(env.size(), 4u);
  EXPECT_EQ(env[0].bpp, 0.25);
  EXPECT_EQ(env[1].psnr_db, 25);
  EXPECT_EQ(env[2].psnr_db, 25);
  EXPECT_EQ(env[3].psnr_db, 25);
}

TEST(Separation, DeadChannelFallsBackToFloor) {
  const Image img = synth(32);
  const channel::ChannelRealization dead{ComplexMatrix::Zero(2, 2), 1.0, ComplexMatrix::Zero(2, 2), 0.0};
  for (const auto mode : {CsiMode::Csir, CsiMode::Csit}) {
    const auto r = separation_bound(img, dead, 1.0 / 12.0, mode, ToyDctCodec().rd_curve(img));
    EXPECT_EQ(r.capacity, 0.0);
    EXPECT_EQ(r.budget_bpp, 0.0);
    EXPECT_TRUE(r.used_floor);
    EXPECT_DOUBLE_EQ(r.psnr_db, floor_psnr(img));
  }
}

TEST(Separation, FloorIsMeanColorPsnr) {
  Image img(1, 2);
  img.pixels << 0, 1, 0, 1, 0, 1;  // channel planes or interleaved, the per-channel mean is 0.5 either way
  EXPECT_NEAR(floor_psnr(img), 10.0 * std::log10(1.0 / 0.25), 1e-12);
}

TEST(Separation, IdentityChannelWorkedExample) {
  const Image img = synth(32);
  const double ratio = 1.0 / 12.0;  // k = 256
  const auto ch = identity_channel(1.0);  // C = 2 log2(2) = 2 bits per use
  const ToyDctCodec codec;
  const auto curve = codec.rd_curve(img);

  // Oracle: best PSNR among rungs that fit 256 * 2 / 1024 = 0.5 bpp.
  double best = floor_psnr(img);
  double best_rate = 0;
  for (const auto& rung : default_ladder()) {
    if (rung.bpp() <= 0.5) {
      best = std::max(best, harness::psnr(img, codec.reconstruct(img, rung)));
      best_rate = std::max(best_rate, rung.bpp());
    }
  }
  EXPECT_DOUBLE_EQ(best_rate, 0.375);

  for (const auto mode : {CsiMode::Csir, CsiMode::Csit}) {
    const auto r = separation_bound(img, ch, ratio, mode, curve);
    EXPECT_NEAR(r.capacity, 2.0, 1e-12);
    EXPECT_NEAR(r.budget_bpp, 0.5, 1e-12);
    EXPECT_DOUBLE_EQ(r.psnr_db, best);
  }
}

TEST(Separation, ClosedLoopDominatesAndSupersetHelps) {
  RngStream rng(3, 0);
  const Image img = synth(32, 1);
  const ToyDctCodec full;
  const ToyDctCodec coarse({{1, 2}, {4, 4}, {16, 8}});
  const CombinedCodec both({&coarse, &full});
  for (int i = 0; i < 20; ++i) {
    const auto ch = channel::sample_channel(rng, 2, channel::snr_to_noise_variance(rng.uniform(0, 20), 2), 0.0);
    const double open = separation_bound_psnr(img, ch, 1.0 / 12.0, CsiMode::Csir, full);
    const double closed = separation_bound_psnr(img, ch, 1.0 / 12.0, CsiMode::Csit, full);
    EXPECT_GE(closed, open);
    EXPECT_GE(separation_bound_psnr(img, ch, 1.0 / 12.0, CsiMode::Csir, both),
              separation_bound_psnr(img, ch, 1.0 / 12.0, CsiMode::Csir, coarse));
  }
}

TEST(Separation, MonotoneInSnr) {
  const Image img = synth(32, 2);
  const auto curve = ToyDctCodec().rd_curve(img);
  RngStream rng(4, 0);
  const ComplexMatrix h = sample_complex_gaussian(rng, 2, 2, 1.0);
  for (const auto mode : {CsiMode::Csir, CsiMode::Csit}) {
    double previous = -1;
    for (double snr = 0; snr <= 27; snr += 3) {
      const channel::ChannelRealization ch{h, channel::snr_to_noise_variance(snr, 2), h, 0.0};
      const double p = separation_bound(img, ch, 1.0 / 12.0, mode, curve).psnr_db;
      EXPECT_GE(p, previous);
      previous = p;
    }
  }
}

TEST(ExternalCodec, ExpandsTemplatesWithQuoting) {
  EXPECT_EQ(expand_command("enc -q {quality} {input} {output}", "a b.ppm", "o.bin", "75"),
            "enc -q '75' 'a b.ppm' 'o.bin'");
  EXPECT_EQ(expand_command("x {input}", "it's", "", ""), "x 'it'\\''s'");
}

TEST(ExternalCodec, CopyCommandIsLossless) {
  ExternalCodecConfig cfg;
  cfg.encode_command = "cp {input} {output}";
  cfg.decode_command = "cp {input} {output}";
  cfg.qualities = {"1"};
  const ExternalCodec codec(cfg);
  const Image img = synth(16);
  const auto curve = codec.rd_curve(img);
  ASSERT_EQ(curve.size(), 1u);
  EXPECT_GT(curve[0].bpp, 24.0);
  EXPECT_EQ(curve[0].psnr_db, harness::kPsnrCap);

  cfg.encode_command = "false";
  EXPECT_THROW(ExternalCodec(cfg).rd_curve(img), Error);
}

}  // namespace
}  // namespace mimojscc::baseline
