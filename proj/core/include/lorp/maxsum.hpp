#pragma once

// Single-valued min-sum messages over the binary assignment encoding.
//
// Every (plane, request) edge carries one implicit binary variable z_pr that
// links the selection factor s_r of the request with the cost factor of the
// plane. Messages are sent as the scalar nu = mu(1) - mu(0).

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "lorp/model.hpp"

namespace lorp::maxsum {

/// Encodes -infinity. Anything at or below kPinnedThreshold is treated as it.
inline constexpr double kNegInfSentinel = -1e18;
inline constexpr double kPinnedThreshold = kNegInfSentinel / 2;

enum class Direction : std::uint8_t { cost_to_selection, selection_to_cost };

struct NuMessage {
  double value = 0.0;
  Direction direction = Direction::cost_to_selection;
  RequestId request{};
  PlaneId plane{};
};

struct WorkloadParams {
  double k = 1000.0;
  double alpha = 1.36;

  void validate() const;
};

struct PlaneFactorInputs {
  std::vector<double> deltas;    // distance to each request the plane knows
  std::vector<double> incoming;  // latest nu_{s_r -> v_p}, aligned with deltas
  WorkloadParams params;

  void validate() const;
};

struct SelectionInputs {
  std::vector<std::pair<PlaneId, double>> incoming;
};

/// Cardinality potential: cost as a function of the number of active variables.
using CardinalityPotential = std::function<double(std::size_t)>;

/// Outgoing messages of some factor, as a function of its incoming messages.
using MessageFunction = std::function<std::vector<double>(std::span<const double>)>;

double cost_to_selection(double delta);

/// Output is aligned with inputs.incoming. A lone candidate receives
/// kNegInfSentinel.
std::vector<double> selection_to_costs(const SelectionInputs& inputs);

/// Argmin over incoming values; ties go to the lowest plane id.
PlaneId selection_decide(const SelectionInputs& inputs);

/// k * eta^alpha, with eta = 0 mapped to 0.
double workload_value(const WorkloadParams& params, std::size_t eta);

/// Messages out of a pure cardinality potential in O(N log N). `w` is queried
/// on 0..N only.
std::vector<double> cardinality_messages(const CardinalityPotential& w,
                                         std::span<const double> incoming);

/// Messages out of the combined plane factor k*eta^alpha + sum delta_r z_pr.
///
/// Incoming values at or below kPinnedThreshold pin their variable to 1; the
/// remaining variables see the potential shifted by the pinned count.
std::vector<double> workload_factor_messages(const PlaneFactorInputs& inputs);

/// Messages of base evaluated at incoming + gammas, plus gammas. This is the
/// message function of base's factor with a unary cost gamma_j * z_j added on
/// every variable.
std::vector<double> unary_shift_messages(const MessageFunction& base,
                                         std::span<const double> gammas,
                                         std::span<const double> incoming);

}  // namespace lorp::maxsum
