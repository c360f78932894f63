#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lorp/model.hpp"

namespace lorp {

/// Best open path found for a plane after adding one stop.
struct PathBid {
  double length = 0.0;
  std::vector<Location> order;  // visiting order, start excluded
};

/// Open path from `start` through every stop in `path` plus `candidate`.
///
/// When the total stop count is at most `exact_limit` the path is the exact
/// minimum (Held-Karp). Otherwise `candidate` is inserted at the cheapest
/// position of `path`, which is taken as the current visiting order.
PathBid plan_min_path(Location start, std::span<const Location> path, Location candidate,
                      std::size_t exact_limit);

/// Length component of plan_min_path.
double evaluate_min_path(Location start, std::span<const Location> path, Location candidate,
                         std::size_t exact_limit);

double path_length(Location start, std::span<const Location> order);

}  // namespace lorp
