#include "lorp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "lorp/errors.hpp"

namespace lorp {

ServiceTimeStats avg_service_time(std::span<const RunRecord> records) {
  ServiceTimeStats out;
  double sum = 0.0;
  for (const auto& rec : records) {
    if (rec.serviced()) {
      sum += *rec.t_serviced - rec.t_submitted;
      ++out.serviced;
    } else {
      ++out.unserviced;
    }
  }
  if (out.serviced == 0) {
    throw precondition_error("avg_service_time: no serviced records");
  }
  out.mean = sum / static_cast<double>(out.serviced);
  return out;
}

SummaryStats aggregate(std::span<const double> per_run) {
  if (per_run.empty()) {
    throw precondition_error("aggregate: empty input");
  }
  std::vector<double> sorted(per_run.begin(), per_run.end());
  std::sort(sorted.begin(), sorted.end());
  SummaryStats s;
  s.n = sorted.size();
  // Summing in sorted order makes the result independent of input order.
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(s.n);
  s.median = sorted[(s.n - 1) / 2];
  s.min = sorted.front();
  s.max = sorted.back();
  if (s.n > 1) {
    double ss = 0.0;
    for (const double v : sorted) {
      ss += (v - s.mean) * (v - s.mean);
    }
    s.std_error = std::sqrt(ss / static_cast<double>(s.n - 1)) / std::sqrt(static_cast<double>(s.n));
  }
  return s;
}

std::string to_string(WilcoxonMethod method) {
  switch (method) {
    case WilcoxonMethod::automatic:
      return "auto";
    case WilcoxonMethod::exact:
      return "exact";
    case WilcoxonMethod::normal:
      return "normal";
  }
  return "unknown";
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> paired_diffs,
                                    WilcoxonMethod method) {
  WilcoxonResult out;
  std::vector<double> d;
  for (const double v : paired_diffs) {
    if (v == 0.0) {
      ++out.n_zero;
    } else {
      d.push_back(v);
    }
  }
  out.n_used = d.size();
  if (d.empty()) {
    out.p_value = 1.0;
    return out;
  }
  if (d.size() < kWilcoxonMinSamples) {
    throw precondition_error("wilcoxon: need at least 5 nonzero differences");
  }

  // Midranks of |d|.
  const std::size_t n = d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return std::abs(d[a]) < std::abs(d[b]); });
  std::vector<double> rank(n);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) {
      ++j;
    }
    const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      rank[order[k]] = mid;
    }
    const auto t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] > 0.0) {
      out.w_plus += rank[i];
    }
  }
  const double nn = static_cast<double>(n);
  const double center = nn * (nn + 1.0) / 4.0;

  if (method == WilcoxonMethod::automatic) {
    method = n <= kWilcoxonExactMax ? WilcoxonMethod::exact : WilcoxonMethod::normal;
  }
  out.method = method;

  if (method == WilcoxonMethod::exact) {
    if (n > 24) {
      throw precondition_error("wilcoxon: exact enumeration refused beyond 24 samples");
    }
    const double observed = std::abs(out.w_plus - center);
    const std::uint64_t total = std::uint64_t{1} << n;
    std::uint64_t extreme = 0;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      double w = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1U) {
          w += rank[i];
        }
      }
      if (std::abs(w - center) >= observed - 1e-9) {
        ++extreme;
      }
    }
    out.p_value = static_cast<double>(extreme) / static_cast<double>(total);
    return out;
  }

  const double variance = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
  if (variance <= 0.0) {
    out.p_value = 1.0;
    return out;
  }
  const double z = std::max(std::abs(out.w_plus - center) - 0.5, 0.0) / std::sqrt(variance);
  out.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return out;
}

}  // namespace lorp
