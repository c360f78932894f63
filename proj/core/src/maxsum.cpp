#include "lorp/maxsum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "lorp/errors.hpp"

namespace lorp::maxsum {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Cumulative-sum / cumulative-min dynamic program over the sorted incoming
// costs. `w` holds the potential on 0..N; indices outside are +inf. Returns
// xi1 - xi0 per variable, aligned with `costs`.
std::vector<double> cardinality_pass(std::span<const double> w, std::span<const double> costs) {
  const std::size_t n = costs.size();
  std::vector<double> out(n, 0.0);
  if (n == 0) {
    return out;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return costs[a] < costs[b]; });
  std::vector<double> sorted(n);
  std::vector<std::size_t> pos(n);
  for (std::size_t i = 0; i < n; ++i) {
    sorted[i] = costs[order[i]];
    pos[order[i]] = i;
  }

  const auto pot = [&](std::ptrdiff_t eta) {
    return (eta < 0 || eta > static_cast<std::ptrdiff_t>(n)) ? kInf
                                                             : w[static_cast<std::size_t>(eta)];
  };

  // cs0[i]: i smallest active; cs_minus/cs_plus: same sum, potential shifted.
  std::vector<double> cs0(n + 1), cs_minus(n + 1), cs_plus(n + 1);
  double cs = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const auto si = static_cast<std::ptrdiff_t>(i);
    cs0[i] = cs + pot(si);
    cs_minus[i] = cs + pot(si - 1);
    cs_plus[i] = cs + pot(si + 1);
    if (i < n) {
      cs += sorted[i];
    }
  }

  std::vector<double> m_plus(n + 1), m_left(n + 1), m_right(n + 1), m_minus(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    m_plus[i] = i == 0 ? cs_plus[0] : std::min(cs_plus[i], m_plus[i - 1]);
    m_left[i] = i == 0 ? cs0[0] : std::min(cs0[i], m_left[i - 1]);
    const std::size_t j = n - i;
    m_right[j] = i == 0 ? cs0[n] : std::min(cs0[j], m_right[j + 1]);
    m_minus[j] = i == 0 ? cs_minus[n] : std::min(cs_minus[j], m_minus[j + 1]);
  }

  const auto at = [n](const std::vector<double>& v, std::ptrdiff_t i) {
    return (i < 0 || i > static_cast<std::ptrdiff_t>(n)) ? kInf : v[static_cast<std::size_t>(i)];
  };

  for (std::size_t r = 0; r < n; ++r) {
    const auto i = static_cast<std::ptrdiff_t>(pos[r]);
    const double own = sorted[pos[r]];
    const double xi0 = std::min(at(m_left, i - 1), at(m_minus, i + 1) - own);
    const double xi1 = std::min(at(m_plus, i - 1), at(m_right, i + 1) - own);
    out[r] = xi1 - xi0;
  }
  return out;
}

std::vector<double> tabulate(const CardinalityPotential& w, std::size_t n) {
  std::vector<double> table(n + 1);
  for (std::size_t eta = 0; eta <= n; ++eta) {
    table[eta] = w(eta);
  }
  return table;
}

}  // namespace

void WorkloadParams::validate() const {
  if (!(k >= 0.0) || !std::isfinite(k)) {
    throw precondition_error("workload k must be finite and >= 0");
  }
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) {
    throw precondition_error("workload alpha must be finite and >= 1");
  }
}

void PlaneFactorInputs::validate() const {
  params.validate();
  if (deltas.size() != incoming.size()) {
    throw precondition_error("plane factor: " + std::to_string(deltas.size()) + " deltas vs " +
                             std::to_string(incoming.size()) + " incoming messages");
  }
  if (deltas.empty()) {
    throw precondition_error("plane factor needs at least one request");
  }
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] >= 0.0) || !std::isfinite(deltas[i])) {
      throw precondition_error("plane factor: delta must be finite and >= 0");
    }
    if (!std::isfinite(incoming[i])) {
      throw precondition_error("plane factor: incoming message must be finite");
    }
  }
}

double cost_to_selection(double delta) {
  if (!(delta >= 0.0)) {
    throw precondition_error("cost_to_selection: negative distance");
  }
  return delta;
}

std::vector<double> selection_to_costs(const SelectionInputs& inputs) {
  if (inputs.incoming.empty()) {
    throw precondition_error("selection factor with no candidates");
  }
  double best = kInf;
  double second = kInf;
  for (const auto& [plane, value] : inputs.incoming) {
    if (value < best) {
      second = best;
      best = value;
    } else if (value < second) {
      second = value;
    }
  }
  std::vector<double> out;
  out.reserve(inputs.incoming.size());
  for (const auto& [plane, value] : inputs.incoming) {
    const double other = value != best ? best : second;
    out.push_back(std::isinf(other) ? kNegInfSentinel : -other);
  }
  return out;
}

PlaneId selection_decide(const SelectionInputs& inputs) {
  if (inputs.incoming.empty()) {
    throw precondition_error("selection factor with no candidates");
  }
  auto best = inputs.incoming.front();
  for (const auto& cand : inputs.incoming) {
    if (cand.second < best.second || (cand.second == best.second && cand.first < best.first)) {
      best = cand;
    }
  }
  return best.first;
}

double workload_value(const WorkloadParams& params, std::size_t eta) {
  params.validate();
  if (eta == 0) {
    return 0.0;
  }
  return params.k * std::pow(static_cast<double>(eta), params.alpha);
}

std::vector<double> cardinality_messages(const CardinalityPotential& w,
                                         std::span<const double> incoming) {
  const auto table = tabulate(w, incoming.size());
  return cardinality_pass(table, incoming);
}

std::vector<double> workload_factor_messages(const PlaneFactorInputs& inputs) {
  inputs.validate();
  const std::size_t n = inputs.deltas.size();

  std::vector<std::size_t> free_idx;
  std::vector<std::size_t> pinned_idx;
  for (std::size_t r = 0; r < n; ++r) {
    (inputs.incoming[r] <= kPinnedThreshold ? pinned_idx : free_idx).push_back(r);
  }
  const std::size_t pinned = pinned_idx.size();
  const std::size_t m = free_idx.size();

  // Potential as seen by the free variables: w(eta + pinned), eta in 0..m.
  std::vector<double> shifted(m + 1);
  for (std::size_t eta = 0; eta <= m; ++eta) {
    shifted[eta] = workload_value(inputs.params, eta + pinned);
  }

  std::vector<double> costs(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto r = free_idx[i];
    costs[i] = inputs.incoming[r] + inputs.deltas[r];
  }

  std::vector<double> out(n);
  const auto free_out = cardinality_pass(shifted, costs);
  for (std::size_t i = 0; i < m; ++i) {
    out[free_idx[i]] = free_out[i] + inputs.deltas[free_idx[i]];
  }

  if (pinned > 0) {
    // A pinned variable's own incoming value never reaches its message; the
    // other pinned variables are active and the free ones choose the best
    // prefix of their sorted costs.
    std::vector<double> sorted = costs;
    std::stable_sort(sorted.begin(), sorted.end());
    double on = kInf;
    double off = kInf;
    double cs = 0.0;
    for (std::size_t j = 0; j <= m; ++j) {
      on = std::min(on, cs + workload_value(inputs.params, pinned + j));
      off = std::min(off, cs + workload_value(inputs.params, pinned - 1 + j));
      if (j < m) {
        cs += sorted[j];
      }
    }
    for (const auto r : pinned_idx) {
      out[r] = on - off + inputs.deltas[r];
    }
  }
  return out;
}

std::vector<double> unary_shift_messages(const MessageFunction& base,
                                         std::span<const double> gammas,
                                         std::span<const double> incoming) {
  if (gammas.size() != incoming.size()) {
    throw precondition_error("unary_shift_messages: gammas and incoming differ in size");
  }
  std::vector<double> shifted(incoming.size());
  for (std::size_t j = 0; j < incoming.size(); ++j) {
    shifted[j] = incoming[j] + gammas[j];
  }
  auto out = base(shifted);
  if (out.size() != incoming.size()) {
    throw precondition_error("unary_shift_messages: base returned wrong arity");
  }
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] += gammas[j];
  }
  return out;
}

}  // namespace lorp::maxsum
