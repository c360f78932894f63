#include "lorp/min_path.hpp"

#include <limits>

#include "lorp/errors.hpp"

namespace lorp {

namespace {

constexpr std::size_t kHeldKarpMax = 16;

PathBid exact_open_path(Location start, std::span<const Location> stops) {
  const std::size_t n = stops.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  const std::size_t full = (std::size_t{1} << n) - 1;
  std::vector<double> dp((full + 1) * n, inf);
  std::vector<std::size_t> parent((full + 1) * n, n);
  for (std::size_t j = 0; j < n; ++j) {
    dp[(std::size_t{1} << j) * n + j] = distance(start, stops[j]);
  }
  for (std::size_t mask = 1; mask <= full; ++mask) {
    for (std::size_t last = 0; last < n; ++last) {
      const double here = dp[mask * n + last];
      if (!(mask >> last & 1U) || here == inf) {
        continue;
      }
      for (std::size_t next = 0; next < n; ++next) {
        if (mask >> next & 1U) {
          continue;
        }
        const std::size_t nm = mask | (std::size_t{1} << next);
        const double cand = here + distance(stops[last], stops[next]);
        if (cand < dp[nm * n + next]) {
          dp[nm * n + next] = cand;
          parent[nm * n + next] = last;
        }
      }
    }
  }
  std::size_t last = 0;
  for (std::size_t j = 1; j < n; ++j) {
    if (dp[full * n + j] < dp[full * n + last]) {
      last = j;
    }
  }
  PathBid bid;
  bid.length = dp[full * n + last];
  bid.order.resize(n);
  std::size_t mask = full;
  for (std::size_t k = n; k-- > 0;) {
    bid.order[k] = stops[last];
    const std::size_t prev = parent[mask * n + last];
    mask &= ~(std::size_t{1} << last);
    last = prev;
  }
  return bid;
}

}  // namespace

double path_length(Location start, std::span<const Location> order) {
  double total = 0.0;
  Location at = start;
  for (const auto& stop : order) {
    total += distance(at, stop);
    at = stop;
  }
  return total;
}

PathBid plan_min_path(Location start, std::span<const Location> path, Location candidate,
                      std::size_t exact_limit) {
  if (exact_limit < 1) {
    throw precondition_error("plan_min_path: exact_limit must be >= 1");
  }
  const std::size_t stops = path.size() + 1;
  if (stops <= exact_limit && stops <= kHeldKarpMax) {
    std::vector<Location> all(path.begin(), path.end());
    all.push_back(candidate);
    return exact_open_path(start, all);
  }

  // Cheapest insertion into the current order.
  double best_delta = std::numeric_limits<double>::infinity();
  std::size_t best_pos = 0;
  for (std::size_t i = 0; i <= path.size(); ++i) {
    const Location prev = i == 0 ? start : path[i - 1];
    double delta = distance(prev, candidate);
    if (i < path.size()) {
      delta += distance(candidate, path[i]) - distance(prev, path[i]);
    }
    if (delta < best_delta) {
      best_delta = delta;
      best_pos = i;
    }
  }
  PathBid bid;
  bid.order.assign(path.begin(), path.end());
  bid.order.insert(bid.order.begin() + static_cast<std::ptrdiff_t>(best_pos), candidate);
  bid.length = path_length(start, bid.order);
  return bid;
}

double evaluate_min_path(Location start, std::span<const Location> path, Location candidate,
                         std::size_t exact_limit) {
  return plan_min_path(start, path, candidate, exact_limit).length;
}

}  // namespace lorp
