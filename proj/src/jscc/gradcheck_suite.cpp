// SPDX-License-Identifier: Apache-2.0
#include "mimojscc/jscc/gradcheck_suite.hpp"

#include "mimojscc/harness/dataset.hpp"
#include "mimojscc/jscc/pipeline.hpp"

namespace mimojscc::jscc {

std::vector<GradCheckCase> run_gradcheck_suite(const ModelConfig& profile, const GradCheckSuiteOptions& options) {
  struct Setup {
    std::string name;
    CsiMode mode;
    bool noiseless;
    bool adaptive;
  };
  std::vector<Setup> setups{{"csir_dl_zf", CsiMode::Csir, false, false},
                            {"csit_svd", CsiMode::Csit, false, false},
                            {"csir_noiseless", CsiMode::Csir, true, false},
                            {"csir_adaptive_m", CsiMode::Csir, false, true}};

  const auto image = harness::synth_dataset(1, profile.height, profile.width, options.seed).images.front();
  std::vector<GradCheckCase> out;
  for (const auto& setup : setups) {
    ModelConfig config = profile;
    config.mode = setup.mode;
    config.equalizer = Equalizer::DlZf;
    config.adaptive_m = setup.adaptive;
    // Doubling m_max keeps the token width integral and leaves antennas to pad.
    if (setup.adaptive && config.m_max == 2) config.m_max = 4;
    // With the default 1e3 sentinel the untrained loss is O(100) and a 1e-6
    // step measures rounding noise; this case targets the slice/pad path.
    if (setup.adaptive) config.sentinel = 1.0;
    Model model(config, options.seed);

    ChannelPlan plan = ChannelPlan::fixed(options.snr_db);
    plan.noiseless = setup.noiseless;
    RngStream rng(options.seed, 0x6763);
    const Eigen::Index antennas = setup.adaptive ? 2 : config.m_max;
    const LinkDraw link = draw_link(rng, plan, antennas, config.uses);
    const RowMatrix patches = patchify(image, config.grid);
    const LinkPath path = setup.adaptive ? LinkPath::Padded : LinkPath::Fixed;

    GradCheckCase c;
    c.name = setup.name;
    c.result = nn::gradient_check([&] { return transmit_image(model, patches, link, path).loss; }, model.params(),
                                  options.check);
    c.passed = c.result.max_rel_error < options.tolerance;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace mimojscc::jscc
