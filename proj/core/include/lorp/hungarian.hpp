#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace lorp {

struct Matching {
  // row_to_col[i] is the column matched to row i, if any.
  std::vector<std::optional<std::size_t>> row_to_col;
  double total_cost = 0.0;
};

/// Minimum-cost matching of size min(rows, cols) via Kuhn-Munkres with
/// potentials, O(min^2 * max). `cost` is row-major, rows * cols entries.
Matching hungarian_solve(std::span<const double> cost, std::size_t rows, std::size_t cols);

}  // namespace lorp
