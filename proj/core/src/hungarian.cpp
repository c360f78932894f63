#include "lorp/hungarian.hpp"

#include <cmath>
#include <limits>

#include "lorp/errors.hpp"

namespace lorp {

namespace {

// Shortest augmenting path formulation; requires n <= m. Returns, for each
// row, its column.
std::vector<std::size_t> solve_rows_le_cols(const std::vector<double>& a, std::size_t n,
                                            std::size_t m) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  // 1-based arrays; column 0 is the virtual source.
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) {
          continue;
        }
        const double cur = a[(i0 - 1) * m + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) {
      row_to_col[p[j] - 1] = j - 1;
    }
  }
  return row_to_col;
}

}  // namespace

Matching hungarian_solve(std::span<const double> cost, std::size_t rows, std::size_t cols) {
  if (cost.size() != rows * cols) {
    throw precondition_error("hungarian_solve: cost size does not match rows * cols");
  }
  for (const double c : cost) {
    if (!std::isfinite(c)) {
      throw precondition_error("hungarian_solve: costs must be finite");
    }
  }
  Matching result;
  result.row_to_col.assign(rows, std::nullopt);
  if (rows == 0 || cols == 0) {
    return result;
  }

  if (rows <= cols) {
    const std::vector<double> a(cost.begin(), cost.end());
    const auto assign = solve_rows_le_cols(a, rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      result.row_to_col[i] = assign[i];
    }
  } else {
    std::vector<double> t(rows * cols);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        t[j * rows + i] = cost[i * cols + j];
      }
    }
    const auto assign = solve_rows_le_cols(t, cols, rows);
    for (std::size_t j = 0; j < cols; ++j) {
      result.row_to_col[assign[j]] = j;
    }
  }
  for (std::size_t i = 0; i < rows; ++i) {
    if (result.row_to_col[i]) {
      result.total_cost += cost[i * cols + *result.row_to_col[i]];
    }
  }
  return result;
}

}  // namespace lorp
