// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mimojscc/jscc/train.hpp"

namespace mimojscc::harness {

inline constexpr std::string_view kRecordHeader =
    "mode,snr_db,bandwidth_ratio,m,sigma_e2,seed,psnr_mean,psnr_std,n_images,n_channel_draws,model_id";
inline constexpr std::string_view kHistoryHeader = "step,loss,val_psnr";

/// One sweep cell.
struct TransmissionRecord {
  frontend::CsiMode mode = frontend::CsiMode::Csir;
  double snr_db = 0;
  double bandwidth_ratio = 0;
  Eigen::Index m = 0;
  double sigma_e2 = 0;
  std::uint64_t seed = 0;
  double psnr_mean = 0;
  double psnr_std = 0;
  std::size_t n_images = 0;
  std::size_t n_channel_draws = 0;
  std::string model_id;

  friend bool operator==(const TransmissionRecord&, const TransmissionRecord&) = default;
};

/// Doubles use the shortest representation that reads back exactly.
std::string format_record(const TransmissionRecord& record);
TransmissionRecord parse_record(std::string_view line);

void write_records(std::ostream& out, const std::vector<TransmissionRecord>& records);
void write_records(const std::filesystem::path& path, const std::vector<TransmissionRecord>& records);
/// Checks the header, then parses every non-empty line.
std::vector<TransmissionRecord> read_records(std::istream& in);
std::vector<TransmissionRecord> read_records(const std::filesystem::path& path);

/// step,loss,val_psnr with an empty val_psnr on steps without validation.
void write_history(std::ostream& out, const std::vector<jscc::HistoryRow>& history);
void write_history(const std::filesystem::path& path, const std::vector<jscc::HistoryRow>& history);

}  // namespace mimojscc::harness
