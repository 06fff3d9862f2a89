// SPDX-License-Identifier: Apache-2.0
#include "mimojscc/harness/config.hpp"

#include <fmt/format.h>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>

namespace mimojscc::harness {
namespace fs = std::filesystem;
namespace pt = boost::property_tree;
namespace {

using Setter = std::function<void(const std::string&)>;

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
  throw ConfigError(fmt::format("{}: '{}' is not {}", key, value, expected));
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  const std::string s = boost::algorithm::trim_copy(text);
  T value{};
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty()) bad_value(key, text, "a number");
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) bad_value(key, text, "a finite number");
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string s = boost::algorithm::to_lower_copy(boost::algorithm::trim_copy(text));
  if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
  if (s == "false" || s == "no" || s == "0" || s == "off") return false;
  bad_value(key, text, "a boolean");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  boost::algorithm::split(parts, text, boost::algorithm::is_any_of(","));
  for (auto& p : parts) boost::algorithm::trim(p);
  if (parts.size() == 1 && parts[0].empty()) parts.clear();
  return parts;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  for (const auto& p : split_list(text)) out.push_back(parse_number<T>(key, p));
  if (out.empty()) throw ConfigError(fmt::format("{}: list is empty", key));
  return out;
}

Eigen::Index parse_count(const std::string& key, const std::string& text) {
  const auto v = parse_number<long long>(key, text);
  if (v < 1) bad_value(key, text, "a positive integer");
  return static_cast<Eigen::Index>(v);
}

fs::path resolve(const fs::path& base, const std::string& text) {
  const fs::path p(boost::algorithm::trim_copy(text));
  return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

std::vector<Eigen::Index> ExperimentConfig::sweep_antennas() const {
  return sweep.antennas.empty() ? std::vector<Eigen::Index>{model.m_max} : sweep.antennas;
}

double parse_ratio(const std::string& text) {
  const auto slash = text.find('/');
  double value = 0;
  if (slash == std::string::npos) {
    value = parse_number<double>("bandwidth_ratio", text);
  } else {
    const double num = parse_number<double>("bandwidth_ratio", text.substr(0, slash));
    const double den = parse_number<double>("bandwidth_ratio", text.substr(slash + 1));
    if (den == 0.0) bad_value("bandwidth_ratio", text, "a ratio with nonzero denominator");
    value = num / den;
  }
  if (!(value > 0.0)) bad_value("bandwidth_ratio", text, "a positive ratio");
  return value;
}

ExperimentConfig parse_config(std::istream& in, const fs::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("config: {} (line {})", e.message(), e.line()));
  }

  ExperimentConfig cfg;
  std::string ratio_text;
  bool allow_csit_error = false;
  // The profile sets every model default, so it is applied before other keys.
  if (auto profile = tree.get_optional<std::string>("model.profile")) {
    cfg.profile = boost::algorithm::trim_copy(*profile);
    cfg.model = jscc::ModelConfig::profile(cfg.profile);
  }
  auto& m = cfg.model;
  auto& t = cfg.train;
  auto& s = cfg.sweep;

  std::map<std::string, std::map<std::string, Setter>> schema;
  schema["experiment"] = {
      {"name", [&](const std::string& v) { cfg.name = boost::algorithm::trim_copy(v); }},
      {"seed", [&](const std::string& v) { cfg.seeds = {parse_number<std::uint64_t>("seed", v)}; }},
      {"seeds", [&](const std::string& v) { cfg.seeds = parse_list<std::uint64_t>("seeds", v); }},
      {"output", [&](const std::string& v) { cfg.output = resolve(base_dir, v); }},
      {"allow_csit_error", [&](const std::string& v) { allow_csit_error = parse_bool("allow_csit_error", v); }},
  };
  schema["model"] = {
      {"profile", [](const std::string&) {}},
      {"mode", [&](const std::string& v) { m.mode = frontend::parse_csi_mode(boost::algorithm::trim_copy(v)); }},
      {"antennas", [&](const std::string& v) { m.m_max = parse_count("antennas", v); }},
      {"bandwidth_ratio", [&](const std::string& v) { ratio_text = v; }},
      {"height", [&](const std::string& v) { m.height = parse_count("height", v); }},
      {"width", [&](const std::string& v) { m.width = parse_count("width", v); }},
      {"grid", [&](const std::string& v) { m.grid = parse_count("grid", v); }},
      {"dim", [&](const std::string& v) { m.dim = parse_count("dim", v); }},
      {"heads", [&](const std::string& v) { m.heads = parse_count("heads", v); }},
      {"depth", [&](const std::string& v) { m.depth = parse_number<Eigen::Index>("depth", v); }},
      {"mlp_hidden", [&](const std::string& v) { m.mlp_hidden = parse_count("mlp_hidden", v); }},
      {"residual_hidden", [&](const std::string& v) { m.residual_hidden = parse_count("residual_hidden", v); }},
      {"adaptive_m", [&](const std::string& v) { m.adaptive_m = parse_bool("adaptive_m", v); }},
      {"equalizer", [&](const std::string& v) { m.equalizer = jscc::parse_equalizer(boost::algorithm::trim_copy(v)); }},
      {"csit_uses_estimate", [&](const std::string& v) { m.csit_uses_estimate = parse_bool("csit_uses_estimate", v); }},
      {"sentinel", [&](const std::string& v) { m.sentinel = parse_number<double>("sentinel", v); }},
  };
  schema["train"] = {
      {"steps", [&](const std::string& v) { t.options.steps = parse_number<std::int64_t>("steps", v); }},
      {"batch", [&](const std::string& v) { t.options.batch = parse_count("batch", v); }},
      {"lr", [&](const std::string& v) { t.options.adam.lr = parse_number<double>("lr", v); }},
      {"beta1", [&](const std::string& v) { t.options.adam.beta1 = parse_number<double>("beta1", v); }},
      {"beta2", [&](const std::string& v) { t.options.adam.beta2 = parse_number<double>("beta2", v); }},
      {"eps", [&](const std::string& v) { t.options.adam.eps = parse_number<double>("eps", v); }},
      {"snr", [&](const std::string& v) { t.plan.snr.lo = t.plan.snr.hi = parse_number<double>("snr", v); }},
      {"snr_min", [&](const std::string& v) { t.plan.snr.lo = parse_number<double>("snr_min", v); }},
      {"snr_max", [&](const std::string& v) { t.plan.snr.hi = parse_number<double>("snr_max", v); }},
      {"sigma_e2", [&](const std::string& v) { t.plan.sigma_e2 = parse_number<double>("sigma_e2", v); }},
      {"identity_channel", [&](const std::string& v) { t.plan.identity_channel = parse_bool("identity_channel", v); }},
      {"noiseless", [&](const std::string& v) { t.plan.noiseless = parse_bool("noiseless", v); }},
      {"eval_every", [&](const std::string& v) { t.options.eval_every = parse_number<std::int64_t>("eval_every", v); }},
      {"val_draws", [&](const std::string& v) { t.options.val_draws = parse_count("val_draws", v); }},
      {"early_stopping", [&](const std::string& v) { t.options.early_stopping = parse_bool("early_stopping", v); }},
      {"patience", [&](const std::string& v) { t.options.patience = parse_number<int>("patience", v); }},
      {"min_delta_db", [&](const std::string& v) { t.options.min_delta_db = parse_number<double>("min_delta_db", v); }},
      {"checkpoint", [&](const std::string& v) { t.checkpoint = resolve(base_dir, v); }},
      {"history", [&](const std::string& v) { t.history = resolve(base_dir, v); }},
  };
  schema["data"] = {
      {"source",
       [&](const std::string& v) {
         const auto src = boost::algorithm::trim_copy(v);
         if (src == "synthetic") {
           cfg.data.source = DataConfig::Source::Synthetic;
         } else if (src == "directory") {
           cfg.data.source = DataConfig::Source::Directory;
         } else {
           bad_value("source", v, "synthetic or directory");
         }
       }},
      {"count", [&](const std::string& v) { cfg.data.count = static_cast<std::size_t>(parse_count("count", v)); }},
      {"seed", [&](const std::string& v) { cfg.data.seed = parse_number<std::uint64_t>("seed", v); }},
      {"directory", [&](const std::string& v) { cfg.data.directory = resolve(base_dir, v); }},
      {"sweep_split",
       [&](const std::string& v) {
         const auto split = boost::algorithm::trim_copy(v);
         if (split != "validation" && split != "all") bad_value("sweep_split", v, "validation or all");
         cfg.data.sweep_on_validation = split == "validation";
       }},
  };
  schema["sweep"] = {
      {"checkpoint", [&](const std::string& v) { s.checkpoint = resolve(base_dir, v); }},
      {"snr", [&](const std::string& v) { s.snr_db = parse_list<double>("snr", v); }},
      {"sigma_e2", [&](const std::string& v) { s.sigma_e2 = parse_list<double>("sigma_e2", v); }},
      {"antennas",
       [&](const std::string& v) {
         s.antennas.clear();
         for (auto a : parse_list<long long>("antennas", v)) s.antennas.push_back(static_cast<Eigen::Index>(a));
       }},
      {"draws", [&](const std::string& v) { s.draws = parse_count("draws", v); }},
      {"threads", [&](const std::string& v) { s.threads = static_cast<unsigned>(parse_count("threads", v)); }},
      {"psnr_peak", [&](const std::string& v) { s.peak = parse_peak_mode(boost::algorithm::trim_copy(v)); }},
      {"model_id", [&](const std::string& v) { s.model_id = boost::algorithm::trim_copy(v); }},
  };
  schema["baseline"] = {
      {"codec",
       [&](const std::string& v) {
         const auto kind = boost::algorithm::trim_copy(v);
         if (kind == "toy") {
           cfg.baseline.codec = BaselineConfig::Kind::Toy;
         } else if (kind == "external") {
           cfg.baseline.codec = BaselineConfig::Kind::External;
         } else {
           bad_value("codec", v, "toy or external");
         }
       }},
      {"encode_command", [&](const std::string& v) { cfg.baseline.external.encode_command = boost::algorithm::trim_copy(v); }},
      {"decode_command", [&](const std::string& v) { cfg.baseline.external.decode_command = boost::algorithm::trim_copy(v); }},
      {"qualities", [&](const std::string& v) { cfg.baseline.external.qualities = split_list(v); }},
      {"work_dir", [&](const std::string& v) { cfg.baseline.external.work_dir = resolve(base_dir, v); }},
      {"include_toy", [&](const std::string& v) { cfg.baseline.include_toy = parse_bool("include_toy", v); }},
  };

  for (const auto& [section, body] : tree) {
    auto known = schema.find(section);
    if (body.empty()) throw ConfigError(fmt::format("config: key '{}' outside a section", section));
    if (known == schema.end()) throw ConfigError(fmt::format("config: unknown section [{}]", section));
    for (const auto& [key, node] : body) {
      auto setter = known->second.find(key);
      if (setter == known->second.end() || !node.empty()) {
        throw ConfigError(fmt::format("config: unknown key '{}' in [{}]", key, section));
      }
      setter->second(node.data());
    }
  }

  if (!ratio_text.empty()) cfg.bandwidth_ratio = parse_ratio(ratio_text);
  m.uses = jscc::uses_for_ratio(cfg.bandwidth_ratio, m.height, m.width);
  m.snr_train = t.plan.snr;
  m.validate();

  t.plan.allow_csit_error = allow_csit_error;
  s.allow_csit_error = allow_csit_error;
  jscc::validate_plan(t.plan, m);
  if (cfg.seeds.empty()) throw ConfigError("config: at least one seed is required");
  if (t.options.steps < 0 || t.options.patience < 1 || t.options.eval_every < 0 || !(t.options.adam.lr >= 0.0)) {
    throw ConfigError("config: train steps, eval_every and lr must be non-negative, patience positive");
  }
  for (double e : s.sigma_e2) {
    if (e < 0.0) throw ConfigError("config: sigma_e2 values must be non-negative");
    if (e > 0.0 && m.mode == frontend::CsiMode::Csit && !allow_csit_error) {
      throw ConfigError("config: sigma_e2 > 0 under csit needs allow_csit_error = true");
    }
  }
  for (auto a : cfg.sweep_antennas()) {
    const bool ok = m.adaptive_m ? (a >= 2 && a <= m.m_max) : a == m.m_max;
    if (!ok) throw ConfigError(fmt::format("config: sweep antenna count {} not supported by this model", a));
  }
  if (cfg.data.source == DataConfig::Source::Directory && cfg.data.directory.empty()) {
    throw ConfigError("config: data source 'directory' needs a directory");
  }
  if (cfg.baseline.codec == BaselineConfig::Kind::External) baseline::ExternalCodec{cfg.baseline.external};
  if (s.model_id.empty()) s.model_id = s.checkpoint.stem().string();
  if (s.model_id.find_first_of(",\n\r\"") != std::string::npos) {
    throw ConfigError("config: model_id must not contain commas, quotes or newlines");
  }
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config {}", path.string()));
  return parse_config(in);
}

Dataset load_dataset(const ExperimentConfig& config) {
  if (config.data.source == DataConfig::Source::Directory) {
    return load_images(config.data.directory, config.model.height, config.model.width);
  }
  return synth_dataset(config.data.count, config.model.height, config.model.width, config.data.seed);
}

}  // namespace mimojscc::harness
