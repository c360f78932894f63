#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "lorp/simulator.hpp"

namespace lorp {

struct ServiceTimeStats {
  double mean = 0.0;
  std::size_t serviced = 0;
  std::size_t unserviced = 0;
};

/// Mean of t_serviced - t_submitted over serviced records. Throws
/// precondition_error when nothing was serviced.
ServiceTimeStats avg_service_time(std::span<const RunRecord> records);

struct SummaryStats {
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;  // lower middle element for even n
  double std_error = 0.0;
  double min = 0.0;
  double max = 0.0;
};

SummaryStats aggregate(std::span<const double> per_run);

enum class WilcoxonMethod { automatic, exact, normal };

struct WilcoxonResult {
  double p_value = 1.0;
  double w_plus = 0.0;
  std::size_t n_used = 0;   // nonzero differences
  std::size_t n_zero = 0;   // dropped zero differences
  WilcoxonMethod method = WilcoxonMethod::exact;
};

inline constexpr std::size_t kWilcoxonExactMax = 12;
inline constexpr std::size_t kWilcoxonMinSamples = 5;

/// Two-sided signed-rank test with zero differences dropped. Automatic picks
/// exact sign enumeration up to kWilcoxonExactMax samples, otherwise the
/// normal approximation with tie-corrected variance and continuity
/// correction. All-zero input gives p = 1.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> paired_diffs,
                                    WilcoxonMethod method = WilcoxonMethod::automatic);

std::string to_string(WilcoxonMethod method);

}  // namespace lorp
