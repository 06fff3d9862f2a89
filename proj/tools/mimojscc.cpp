// SPDX-License-Identifier: Apache-2.0
// Command-line front end: train, eval, sweep, baseline, gradcheck.
#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <cstdio>
#include <iostream>

#include "mimojscc/harness/sweep.hpp"
#include "mimojscc/jscc/gradcheck_suite.hpp"
#include "mimojscc/nn/checkpoint.hpp"

namespace fs = std::filesystem;
using namespace mimojscc;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

int cmd_train(const fs::path& config_path, std::optional<std::uint64_t> seed, std::optional<std::int64_t> steps) {
  auto config = harness::load_config(config_path);
  if (seed) config.seeds = {*seed};
  if (steps) config.train.options.steps = *steps;
  config.train.options.seed = config.seeds.front();
  config.train.options.plan = config.train.plan;

  const auto split = harness::split_dataset(harness::load_dataset(config));
  if (split.train.empty()) throw ConfigError("training split is empty");
  jscc::Model model(config.model, config.train.options.seed);
  const auto t0 = std::chrono::steady_clock::now();
  const auto result = jscc::train(model, split.train, split.validation, config.train.options);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  for (const auto& p : {config.train.checkpoint, config.train.history}) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
  }
  nn::save_checkpoint(model.params(), config.train.checkpoint);
  harness::write_history(config.train.history, result.history);
  fmt::print("steps={} final_loss={:.6g} best_val_psnr={} best_step={} stopped_early={} power_checks={} "
             "power_violations={} seconds={:.1f}\n",
             result.steps_run, result.history.empty() ? 0.0 : result.history.back().loss,
             result.best_val_psnr ? fmt::format("{:.4f}", *result.best_val_psnr) : "nan", result.best_step,
             result.stopped_early, result.power.checks, result.power.violations, secs);
  fmt::print("checkpoint={} history={}\n", config.train.checkpoint.string(), config.train.history.string());
  return result.power.violations == 0 ? 0 : kExitFailure;
}

struct EvalArgs {
  fs::path ckpt;
  std::optional<fs::path> config;
  std::string profile = "tiny";
  std::string mode = "csir";
  std::string equalizer = "dl_zf";
  std::string ratio = "1/12";
  Eigen::Index antennas = 2;
  bool adaptive = false;
  std::vector<double> snr;
  double sigma_e2 = 0;
  Eigen::Index draws = 10;
  std::uint64_t seed = 1;
  std::optional<Eigen::Index> m;
  std::size_t images = 32;
  std::uint64_t data_seed = 7;
  unsigned threads = 1;
  bool allow_csit_error = false;
};

int cmd_eval(const EvalArgs& a) {
  harness::ExperimentConfig config;
  if (a.config) {
    config = harness::load_config(*a.config);
  } else {
    config.model = jscc::ModelConfig::profile(a.profile);
    config.model.mode = frontend::parse_csi_mode(a.mode);
    config.model.equalizer = jscc::parse_equalizer(a.equalizer);
    config.model.m_max = a.antennas;
    config.model.adaptive_m = a.adaptive;
    config.bandwidth_ratio = harness::parse_ratio(a.ratio);
    config.model.uses = jscc::uses_for_ratio(config.bandwidth_ratio, config.model.height, config.model.width);
    config.model.validate();
    config.data.count = a.images;
    config.data.seed = a.data_seed;
    config.data.sweep_on_validation = false;
  }
  if (!fs::is_regular_file(a.ckpt)) throw ConfigError(fmt::format("checkpoint {} does not exist", a.ckpt.string()));
  const auto model = jscc::load_model(config.model, a.ckpt);
  const auto images = harness::sweep_images(config, harness::load_dataset(config));

  for (double snr : a.snr) {
    jscc::EvalOptions options;
    options.plan = jscc::ChannelPlan::fixed(snr, a.sigma_e2);
    options.plan.allow_csit_error = a.allow_csit_error || config.sweep.allow_csit_error;
    options.draws = a.draws;
    options.seed = a.seed;
    options.antennas = a.m;
    options.peak = config.sweep.peak;
    options.threads = a.threads;
    const auto stats = jscc::evaluate_model(model, images, options);
    fmt::print("mode={} snr_db={} sigma_e2={} m={} psnr_mean={:.6f} psnr_std={:.6f} n_images={} n_channel_draws={}\n",
               frontend::to_string(config.model.mode), snr, a.sigma_e2, a.m.value_or(config.model.m_max), stats.mean,
               stats.stddev, images.size(), a.draws);
    if (stats.power.violations != 0) throw NumericError("power constraint violated during evaluation");
  }
  return 0;
}

int cmd_sweep(const fs::path& config_path, std::optional<fs::path> output, bool baseline) {
  auto config = harness::load_config(config_path);
  if (output) config.output = *output;
  const auto records = baseline ? harness::run_baseline_sweep(config) : harness::run_sweep(config);
  fmt::print("wrote {} rows to {}\n", records.size(), config.output.string());
  return 0;
}

int cmd_gradcheck(const std::string& profile, Eigen::Index coords, std::uint64_t seed) {
  jscc::GradCheckSuiteOptions options;
  options.check.coords_per_param = coords;
  options.check.seed = seed;
  options.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  for (const auto& c : jscc::run_gradcheck_suite(jscc::ModelConfig::profile(profile), options)) {
    fmt::print("{} {} max_rel_error={:.3e} coords={} worst={}[{}]\n", c.passed ? "PASS" : "FAIL", c.name,
               c.result.max_rel_error, c.result.coords_checked, c.result.worst_param, c.result.worst_index);
    ok = ok && c.passed;
  }
  fmt::print("gradcheck {} in {:.2f}s (tolerance {:g})\n", ok ? "passed" : "failed",
             std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), options.tolerance);
  return ok ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MIMO deep joint source-channel coding link lab"};
  app.require_subcommand(1);

  fs::path config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> steps;
  auto* train = app.add_subcommand("train", "Train a model and write checkpoint plus history CSV");
  train->add_option("--config", config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
  train->add_option("--seed", seed, "Override the training seed");
  train->add_option("--steps", steps, "Override the step count");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint and print PSNR statistics");
  eval->add_option("--ckpt", eval_args.ckpt, "Checkpoint file")->required();
  eval->add_option("--snr", eval_args.snr, "SNR in dB (repeatable)")->required();
  eval->add_option("--config", eval_args.config, "Experiment config; replaces the model and data flags");
  eval->add_option("--profile", eval_args.profile, "Model profile (tiny, full)");
  eval->add_option("--mode", eval_args.mode, "csir or csit");
  eval->add_option("--equalizer", eval_args.equalizer, "dl_zf, zf or mmse");
  eval->add_option("--ratio", eval_args.ratio, "Bandwidth ratio, e.g. 1/12");
  eval->add_option("--antennas", eval_args.antennas, "Antenna count the model was built for");
  eval->add_flag("--adaptive", eval_args.adaptive, "Model was trained with adaptive antenna counts");
  eval->add_option("--m", eval_args.m, "Active antennas (adaptive models)");
  eval->add_option("--sigma-e2", eval_args.sigma_e2, "Channel estimation error variance");
  eval->add_flag("--allow-csit-error", eval_args.allow_csit_error, "Permit estimation error under csit");
  eval->add_option("--draws", eval_args.draws, "Channel draws per image");
  eval->add_option("--seed", eval_args.seed, "Evaluation seed");
  eval->add_option("--images", eval_args.images, "Synthetic image count");
  eval->add_option("--data-seed", eval_args.data_seed, "Synthetic data seed");
  eval->add_option("--threads", eval_args.threads, "Worker threads");

  std::optional<fs::path> output;
  auto* sweep = app.add_subcommand("sweep", "Evaluate a checkpoint over the configured grid and write CSV");
  sweep->add_option("--config", config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--output", output, "Override the CSV path");
  auto* base = app.add_subcommand("baseline", "Write the separation-bound CSV for the configured grid");
  base->add_option("--config", config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
  base->add_option("--output", output, "Override the CSV path");

  std::string profile = "tiny";
  Eigen::Index coords = 16;
  std::uint64_t gc_seed = 1;
  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of the full link gradients");
  gradcheck->add_option("--profile", profile, "Model profile (tiny, full)");
  gradcheck->add_option("--coords", coords, "Coordinates sampled per parameter (0 = all)");
  gradcheck->add_option("--seed", gc_seed, "Seed for the model, data and sampled coordinates");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    if (*train) return cmd_train(config_path, seed, steps);
    if (*eval) return cmd_eval(eval_args);
    if (*sweep) return cmd_sweep(config_path, output, false);
    if (*base) return cmd_sweep(config_path, output, true);
    if (*gradcheck) return cmd_gradcheck(profile, coords, gc_seed);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
