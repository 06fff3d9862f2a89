// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mimojscc/baseline/codec.hpp"
#include "mimojscc/harness/dataset.hpp"
#include "mimojscc/harness/metrics.hpp"
#include "mimojscc/jscc/train.hpp"

namespace mimojscc::harness {

struct DataConfig {
  enum class Source { Synthetic, Directory } source = Source::Synthetic;
  std::size_t count = 256;
  std::uint64_t seed = 7;
  std::filesystem::path directory;
  /// Images used by sweeps: the validation split or all of them.
  bool sweep_on_validation = true;
};

struct TrainConfig {
  jscc::TrainOptions options;
  jscc::ChannelPlan plan;
  std::filesystem::path checkpoint = "model.ckpt";
  std::filesystem::path history = "history.csv";
};

struct SweepConfig {
  std::filesystem::path checkpoint = "model.ckpt";
  std::vector<double> snr_db{0, 5, 10, 15, 20};
  std::vector<double> sigma_e2{0};
  std::vector<Eigen::Index> antennas;  // empty: just m_max
  Eigen::Index draws = 10;
  unsigned threads = 1;
  PeakMode peak = PeakMode::Fixed;
  bool allow_csit_error = false;
  std::string model_id;  // defaults to the checkpoint stem
};

struct BaselineConfig {
  enum class Kind { Toy, External } codec = Kind::Toy;
  baseline::ExternalCodecConfig external;
  /// Also merge the toy ladder into the external codec's curve.
  bool include_toy = false;
};

/// Everything one config file describes.
struct ExperimentConfig {
  std::string name = "experiment";
  std::vector<std::uint64_t> seeds{1};
  std::filesystem::path output = "results.csv";
  std::string profile = "tiny";
  double bandwidth_ratio = 1.0 / 12.0;
  jscc::ModelConfig model = jscc::ModelConfig::tiny();
  DataConfig data;
  TrainConfig train;
  SweepConfig sweep;
  BaselineConfig baseline;

  /// Sweep antenna counts, defaulting to {m_max}.
  std::vector<Eigen::Index> sweep_antennas() const;
};

/// Parses INI text. Unknown sections or keys, malformed values and
/// inconsistent sizes raise ConfigError. Relative paths resolve against
/// `base_dir`, or stay relative to the working directory when it is empty.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
/// Paths inside the file stay relative to the working directory.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Accepts decimals or fractions such as "1/12".
double parse_ratio(const std::string& text);

/// Loads or synthesizes the configured dataset.
Dataset load_dataset(const ExperimentConfig& config);

}  // namespace mimojscc::harness
