// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "mimojscc/harness/dataset.hpp"
#include "mimojscc/jscc/model.hpp"
#include "mimojscc/jscc/pipeline.hpp"
#include "mimojscc/jscc/train.hpp"
#include "mimojscc/nn/ops.hpp"

namespace mimojscc::jscc {
namespace {

using frontend::CsiMode;
using nn::Tensor;

ModelConfig tiny(CsiMode mode, Equalizer eq = Equalizer::DlZf) {
  ModelConfig c = ModelConfig::tiny();
  c.mode = mode;
  c.equalizer = mode == CsiMode::Csit ? Equalizer::DlZf : eq;
  return c;
}

std::vector<Image> images(std::size_t n, const ModelConfig& c, std::uint64_t seed = 7) {
  return harness::synth_dataset(n, c.height, c.width, seed).images;
}

LinkDraw noiseless_link(std::uint64_t seed, Eigen::Index m, Eigen::Index k) {
  ChannelPlan plan = ChannelPlan::fixed(10.0);
  plan.noiseless = true;
  RngStream rng(seed, 0);
  return draw_link(rng, plan, m, k);
}

TEST(Packing, WorkedExample) {
  RowMatrix z(1, 4);
  z << 1, 2, 3, 4;
  const ComplexMatrix x = pack_symbols(z, 1, 2);
  EXPECT_EQ(x(0, 0), std::complex<double>(1, 3));
  EXPECT_EQ(x(0, 1), std::complex<double>(2, 4));
  EXPECT_EQ(unpack_symbols(x, 1), z);
  EXPECT_THROW(pack_symbols(z, 1, 3), Error);
}

TEST(Packing, RoundTripsRandomBlocks) {
  RngStream rng(1, 0);
  for (Eigen::Index m = 1; m <= 4; ++m) {
    const ComplexMatrix x = sample_complex_gaussian(rng, m, 8, 1.0);
    EXPECT_EQ(pack_symbols(unpack_symbols(x, 4), m, 8), x);
  }
}

TEST(PowerNormalize, UnitPowerScaleInvarianceAndZero) {
  RngStream rng(2, 0);
  RowMatrix z(4, 16);
  for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = rng.normal_pair().first;
  const ComplexMatrix x = power_normalize(z, 2, 16);
  EXPECT_NEAR(channel::verify_power(x), 1.0, 1e-12);
  EXPECT_LT((power_normalize(RowMatrix(7.5 * z), 2, 16) - x).norm(), 1e-12);
  EXPECT_EQ(power_normalize(RowMatrix::Zero(4, 16), 2, 16), ComplexMatrix::Zero(2, 16));
}

TEST(Model, ParameterNamesAndShapes) {
  const Model m(tiny(CsiMode::Csir), 1);
  const auto& store = m.params();
  EXPECT_TRUE(store.contains("enc.embed.w"));
  EXPECT_TRUE(store.contains("enc.layer1.head1.q.w"));
  EXPECT_TRUE(store.contains("dec.merge.w"));
  EXPECT_TRUE(store.contains("res.alpha"));
  EXPECT_EQ(store.at("res.alpha").value()(0, 0), 0.25);
  EXPECT_EQ(store.at("res.fc1.w").rows(), 2 * 4 + 2 * 2);

  EXPECT_FALSE(Model(tiny(CsiMode::Csir, Equalizer::Zf), 1).params().contains("res.fc1.w"));
  EXPECT_THROW(Model(tiny(CsiMode::Csir, Equalizer::Zf), m.params().clone()), Error);

  const Model again(tiny(CsiMode::Csir), 1);
  for (const auto& e : store.entries()) EXPECT_EQ(e.tensor.value(), again.params().at(e.name).value()) << e.name;
}

TEST(Model, EncoderIsPermutationEquivariant) {
  const ModelConfig c = tiny(CsiMode::Csir);
  const Model m(c, 3);
  const RowMatrix patches = patchify(images(1, c)[0], c.grid);
  RealVector positions(c.tokens());
  for (Eigen::Index i = 0; i < positions.size(); ++i) positions(i) = static_cast<double>(i);
  const std::vector<Eigen::Index> perm{2, 0, 3, 1};
  RowMatrix permuted(patches.rows(), patches.cols());
  RealVector permuted_pos(positions.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    permuted.row(static_cast<Eigen::Index>(i)) = patches.row(perm[i]);
    permuted_pos(static_cast<Eigen::Index>(i)) = positions(perm[i]);
  }
  const RowMatrix base = m.encode(Tensor::constant(patches), nullptr, positions).value();
  const RowMatrix out = m.encode(Tensor::constant(permuted), nullptr, permuted_pos).value();
  for (std::size_t i = 0; i < perm.size(); ++i) {
    EXPECT_LT((out.row(static_cast<Eigen::Index>(i)) - base.row(perm[i])).norm(), 1e-12);
  }
}

TEST(Model, ZeroResidualReducesToZeroForcing) {
  const ModelConfig c = tiny(CsiMode::Csir, Equalizer::DlZf);
  Model dl(c, 4);
  dl.params().at("res.fc2.w").mutable_value().setZero();
  dl.params().at("res.fc2.b").mutable_value().setZero();

  nn::ParameterStore without_res;
  for (const auto& e : dl.params().entries()) {
    if (e.name.rfind("res.", 0) != 0) without_res.add(e.name, e.tensor.value(), e.shape);
  }
  const Model zf(tiny(CsiMode::Csir, Equalizer::Zf), std::move(without_res));

  const auto imgs = images(2, c);
  RngStream rng(9, 0);
  const LinkDraw link = draw_link(rng, ChannelPlan::fixed(5.0, 0.2), c.m_max, c.uses);
  for (const auto& img : imgs) {
    const RowMatrix patches = patchify(img, c.grid);
    const auto a = transmit_image(dl, patches, link, LinkPath::Fixed);
    const auto b = transmit_image(zf, patches, link, LinkPath::Fixed);
    EXPECT_EQ(a.reconstruction.value(), b.reconstruction.value());
  }
}

TEST(Model, DecoderWithOnlyOutputBiasIsConstant) {
  const ModelConfig c = tiny(CsiMode::Csir);
  Model m(c, 5);
  RngStream rng(5, 1);
  RowMatrix bias(1, c.patch_dim());
  for (Eigen::Index i = 0; i < bias.size(); ++i) bias(0, i) = rng.uniform();
  for (const auto& e : m.params().entries()) {
    if (e.name.rfind("dec.", 0) == 0) m.params().at(e.name).mutable_value().setZero();
  }
  m.params().at("dec.out.b").mutable_value() = bias;
  RowMatrix symbols(c.tokens(), c.token_width());
  for (Eigen::Index i = 0; i < symbols.size(); ++i) symbols.data()[i] = rng.normal_pair().first;
  const RowMatrix out =
      m.decode(Tensor::constant(symbols), Tensor::constant(RowMatrix::Constant(c.tokens(), c.token_width(), 0.3)))
          .value();
  for (Eigen::Index r = 0; r < out.rows(); ++r) EXPECT_LT((out.row(r) - bias).norm(), 1e-15);
}

// Without noise, SVD or ZF equalization hands the decoder exactly the power-normalized encoder output.
void expect_transparent_link(const ModelConfig& c, std::uint64_t seed) {
  const Model m(c, seed);
  const RowMatrix patches = patchify(images(1, c)[0], c.grid);
  const LinkDraw link = noiseless_link(seed, c.m_max, c.uses);
  const Tensor zero_heatmap = Tensor::constant(RowMatrix::Zero(c.tokens(), c.token_width()));
  const RowMatrix z = m.encode(Tensor::constant(patches), c.mode == CsiMode::Csit ? &zero_heatmap : nullptr).value();
  const RowMatrix sent = z * (std::sqrt(static_cast<double>(c.m_max * c.uses)) / z.norm());
  const RowMatrix expected = m.decode(Tensor::constant(sent), zero_heatmap).value();
  const auto out = transmit_image(m, patches, link, LinkPath::Fixed);
  EXPECT_LT((out.reconstruction.value() - expected).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_NEAR(out.tx_power, 1.0, 1e-12);
}

TEST(Pipeline, NoiselessClosedLoopIsTransparent) {
  for (std::uint64_t s = 1; s <= 5; ++s) expect_transparent_link(tiny(CsiMode::Csit), s);
}

TEST(Pipeline, NoiselessZeroForcingIsTransparent) {
  for (std::uint64_t s = 1; s <= 5; ++s) expect_transparent_link(tiny(CsiMode::Csir, Equalizer::Zf), s);
}

TEST(Pipeline, PaddedPathMatchesFixedAtFullAntennas) {
  for (const auto mode : {CsiMode::Csir, CsiMode::Csit}) {
    ModelConfig c = tiny(mode);
    c.m_max = 4;
    c.adaptive_m = true;
    c.uses = 8;
    const Model m(c, 6);
    const RowMatrix patches = patchify(images(1, c)[0], c.grid);
    RngStream rng(6, 0);
    const LinkDraw link = draw_link(rng, ChannelPlan::fixed(10.0), 4, c.uses);
    const auto fixed = transmit_image(m, patches, link, LinkPath::Fixed);
    const auto padded = transmit_image(m, patches, link, LinkPath::Padded);
    EXPECT_EQ(fixed.reconstruction.value(), padded.reconstruction.value());

    for (Eigen::Index active = 2; active <= 4; ++active) {
      RngStream r(7, static_cast<std::uint64_t>(active));
      PowerMonitor monitor;
      const auto out = transmit_image(m, patches, draw_link(r, ChannelPlan::fixed(10.0), active, c.uses),
                                      LinkPath::Padded, &monitor);
      EXPECT_TRUE(std::isfinite(out.loss.item()));
      EXPECT_EQ(monitor.violations, 0);
    }
  }
}

TEST(Pipeline, RejectsInvalidPlans) {
  ChannelPlan plan = ChannelPlan::fixed(10.0, 0.2);
  EXPECT_THROW(validate_plan(plan, tiny(CsiMode::Csit)), ConfigError);
  plan.allow_csit_error = true;
  EXPECT_NO_THROW(validate_plan(plan, tiny(CsiMode::Csit)));
  EXPECT_NO_THROW(validate_plan(ChannelPlan::fixed(10.0, 0.2), tiny(CsiMode::Csir)));
}

TEST(Pipeline, DrawLinkSnrRangeDegeneratesToFixed) {
  ChannelPlan range;
  range.snr = SnrRange{10.0, 10.0};
  RngStream a(3, 0), b(3, 0);
  const LinkDraw x = draw_link(a, range, 2, 16);
  const LinkDraw y = draw_link(b, ChannelPlan::fixed(10.0), 2, 16);
  EXPECT_EQ(x.snr_db, 10.0);
  EXPECT_EQ(x.ch.h, y.ch.h);
  EXPECT_EQ(x.noise, y.noise);
}

TrainOptions short_run(std::int64_t steps) {
  TrainOptions o;
  o.steps = steps;
  o.batch = 4;
  o.eval_every = 0;
  return o;
}

TEST(Training, IsDeterministic) {
  const ModelConfig c = tiny(CsiMode::Csir);
  const auto data = images(8, c);
  Model a(c, 1), b(c, 1);
  const auto ra = train(a, data, {}, short_run(5));
  const auto rb = train(b, data, {}, short_run(5));
  ASSERT_EQ(ra.history.size(), rb.history.size());
  for (std::size_t i = 0; i < ra.history.size(); ++i) EXPECT_EQ(ra.history[i].loss, rb.history[i].loss);
  for (const auto& e : a.params().entries()) EXPECT_EQ(e.tensor.value(), b.params().at(e.name).value()) << e.name;
  EXPECT_EQ(ra.power.violations, 0);
  EXPECT_EQ(ra.power.checks, 5 * 4);  // no validation set
}

TEST(Training, ZeroLearningRateKeepsParameters) {
  const ModelConfig c = tiny(CsiMode::Csit);
  const auto data = images(4, c);
  Model m(c, 2);
  const nn::ParameterStore before = m.params().clone();
  TrainOptions o = short_run(3);
  o.adam.lr = 0.0;
  train(m, data, {}, o);
  for (const auto& e : before.entries()) EXPECT_EQ(e.tensor.value(), m.params().at(e.name).value()) << e.name;
}

TEST(Training, FixedAndDegenerateRangeAgree) {
  const ModelConfig c = tiny(CsiMode::Csir);
  const auto data = images(4, c);
  Model a(c, 1), b(c, 1);
  TrainOptions oa = short_run(3), ob = short_run(3);
  oa.plan = ChannelPlan::fixed(10.0);
  ob.plan = ChannelPlan{};
  ob.plan->snr = SnrRange{10.0, 10.0};
  train(a, data, {}, oa);
  train(b, data, {}, ob);
  for (const auto& e : a.params().entries()) EXPECT_EQ(e.tensor.value(), b.params().at(e.name).value()) << e.name;
}

TEST(Training, OverfitsOneImageWithoutNoise) {
  const ModelConfig c = tiny(CsiMode::Csir, Equalizer::Zf);
  const auto data = images(1, c);
  Model m(c, 3);
  TrainOptions o = short_run(1500);
  o.batch = 1;
  o.adam.lr = 2e-3;
  o.plan = ChannelPlan::fixed(10.0);
  o.plan->noiseless = true;
  o.plan->identity_channel = true;
  train(m, data, {}, o);
  EvalOptions e;
  e.plan = *o.plan;
  e.draws = 1;
  EXPECT_GE(evaluate_model(m, data, e).mean, 30.0);
}

TEST(Evaluation, ThreadCountDoesNotChangeResults) {
  const ModelConfig c = tiny(CsiMode::Csir);
  const Model m(c, 4);
  const auto data = images(5, c);
  EvalOptions o;
  o.draws = 3;
  const auto one = evaluate_model(m, data, o);
  o.threads = 3;
  const auto three = evaluate_model(m, data, o);
  EXPECT_EQ(one.psnr, three.psnr);
  EXPECT_EQ(one.psnr.size(), 15u);
  EXPECT_EQ(one.power.violations, 0);
  o.antennas = 1;
  EXPECT_THROW(evaluate_model(m, data, o), ConfigError);
}

TEST(Config, RatiosAndValidation) {
  EXPECT_EQ(uses_for_ratio(1.0 / 12.0, 8, 8), 16);
  EXPECT_EQ(uses_for_ratio(1.0 / 12.0, 32, 32), 256);
  EXPECT_THROW(uses_for_ratio(1.0 / 7.0, 8, 8), ConfigError);
  EXPECT_NEAR(ModelConfig::tiny().bandwidth_ratio(), 1.0 / 12.0, 1e-15);
  ModelConfig bad = tiny(CsiMode::Csit);
  bad.equalizer = Equalizer::Mmse;
  EXPECT_THROW(bad.validate(), ConfigError);
  EXPECT_EQ(parse_equalizer("dl_zf"), Equalizer::DlZf);
  EXPECT_THROW(parse_equalizer("lmmse"), ConfigError);
  EXPECT_THROW(ModelConfig::profile("huge"), ConfigError);
  const ModelConfig full = ModelConfig::profile("full");
  EXPECT_NO_THROW(full.validate());
  EXPECT_EQ(full.tokens(), 64);
  EXPECT_EQ(full.patch_dim(), 48);
  EXPECT_EQ(full.uses, 256);
}

}  // namespace
}  // namespace mimojscc::jscc
