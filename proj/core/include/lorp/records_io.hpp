#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lorp/simulator.hpp"

namespace lorp {

inline constexpr const char* kRecordsHeader =
    "request_id,t_submitted,t_injected,t_serviced,service_time,plane_id,serviced";
inline constexpr const char* kSummaryHeader =
    "scenario_id,seed,allocator,k,alpha,n_planes,hotspot_radius,comm_range,n_crises,"
    "avg_service_time,unserviced,status";

void write_records_csv(std::ostream& out, std::span<const RunRecord> records);
void write_records_csv(const std::filesystem::path& path, std::span<const RunRecord> records);
std::vector<RunRecord> read_records_csv(std::istream& in);
std::vector<RunRecord> read_records_csv(const std::filesystem::path& path);

struct SummaryRow {
  std::string scenario_id;
  std::uint64_t seed = 0;
  std::string allocator;
  double k = 0.0;
  double alpha = 0.0;
  int n_planes = 0;
  double hotspot_radius = 0.0;
  double comm_range = 0.0;
  int n_crises = 0;
  std::optional<double> avg_service_time;  // empty when the run failed or serviced nothing
  std::size_t unserviced = 0;
  std::string status = "ok";  // "ok" or the failure message

  bool ok() const { return status == "ok"; }
  friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);
void write_summary_csv(const std::filesystem::path& path, std::span<const SummaryRow> rows);
std::vector<SummaryRow> read_summary_csv(std::istream& in);
std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path);

}  // namespace lorp
