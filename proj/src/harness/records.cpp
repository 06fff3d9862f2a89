// SPDX-License-Identifier: Apache-2.0
#include "mimojscc/harness/records.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

namespace mimojscc::harness {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T field(std::string_view text, const char* name) {
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
    throw ArgumentError(fmt::format("record field {}: cannot parse '{}'", name, text));
  }
  return value;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError(fmt::format("cannot write {}", path.string()));
  return out;
}

}  // namespace

std::string format_record(const TransmissionRecord& r) {
  if (r.model_id.find_first_of(",\n\r") != std::string::npos) {
    throw ArgumentError("model_id must not contain commas or newlines");
  }
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{}", frontend::to_string(r.mode), r.snr_db, r.bandwidth_ratio, r.m,
                     r.sigma_e2, r.seed, r.psnr_mean, r.psnr_std, r.n_images, r.n_channel_draws, r.model_id);
}

TransmissionRecord parse_record(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto f = split_fields(line);
  if (f.size() != 11) throw ArgumentError(fmt::format("record has {} fields, expected 11", f.size()));
  TransmissionRecord r;
  r.mode = frontend::parse_csi_mode(f[0]);
  r.snr_db = field<double>(f[1], "snr_db");
  r.bandwidth_ratio = field<double>(f[2], "bandwidth_ratio");
  r.m = field<Eigen::Index>(f[3], "m");
  r.sigma_e2 = field<double>(f[4], "sigma_e2");
  r.seed = field<std::uint64_t>(f[5], "seed");
  r.psnr_mean = field<double>(f[6], "psnr_mean");
  r.psnr_std = field<double>(f[7], "psnr_std");
  r.n_images = field<std::size_t>(f[8], "n_images");
  r.n_channel_draws = field<std::size_t>(f[9], "n_channel_draws");
  r.model_id = std::string(f[10]);
  return r;
}

void write_records(std::ostream& out, const std::vector<TransmissionRecord>& records) {
  out << kRecordHeader << '\n';
  for (const auto& r : records) out << format_record(r) << '\n';
}

void write_records(const std::filesystem::path& path, const std::vector<TransmissionRecord>& records) {
  auto out = open_output(path);
  write_records(out, records);
}

std::vector<TransmissionRecord> read_records(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ArgumentError("record file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRecordHeader) throw ArgumentError(fmt::format("unexpected record header '{}'", line));
  std::vector<TransmissionRecord> out;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(parse_record(line));
  }
  return out;
}

std::vector<TransmissionRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError(fmt::format("cannot open {}", path.string()));
  return read_records(in);
}

void write_history(std::ostream& out, const std::vector<jscc::HistoryRow>& history) {
  out << kHistoryHeader << '\n';
  for (const auto& row : history) {
    out << fmt::format("{},{},{}\n", row.step, row.loss, row.val_psnr ? fmt::format("{}", *row.val_psnr) : "");
  }
}

void write_history(const std::filesystem::path& path, const std::vector<jscc::HistoryRow>& history) {
  auto out = open_output(path);
  write_history(out, history);
}

}  // namespace mimojscc::harness
