#pragma once

// One-shot allocation strategies over a reallocation-cycle snapshot.

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lorp/maxsum.hpp"
#include "lorp/model.hpp"

namespace lorp {

struct PlaneSnapshot {
  PlaneId id{};
  Location location;
};

struct AllocationProblem {
  std::vector<PlaneSnapshot> planes;  // ascending id
  std::map<RequestId, PlaneId> owner;
  std::map<RequestId, Location> request_locations;
  std::map<RequestId, std::vector<PlaneId>> candidates;  // P_r, ascending
  std::map<PlaneId, std::vector<RequestId>> knows;       // R_p, ascending

  Location plane_location(PlaneId id) const;
  Location request_location(RequestId id) const;

  /// Throws malformed_snapshot if an invariant is broken.
  void validate() const;
};

/// Builds a problem and derives `knows` as the transpose of `candidates`.
/// Candidate lists are sorted and deduplicated; owners are added if missing.
AllocationProblem make_problem(std::vector<PlaneSnapshot> planes,
                               std::map<RequestId, PlaneId> owner,
                               std::map<RequestId, Location> request_locations,
                               std::map<RequestId, std::vector<PlaneId>> candidates);

using Assignment = std::map<RequestId, PlaneId>;

/// Throws malformed_snapshot unless `assignment` is total and candidate-respecting.
void check_assignment(const AllocationProblem& problem, const Assignment& assignment);

enum class Method { independent, workload, psi_auction, hungarian, greedy };

/// Who can be a candidate for a request: the owner's one-hop neighbourhood, or
/// every plane (centralized baselines).
enum class Knowledge { local, global };

struct AllocatorConfig {
  Method method = Method::independent;
  Knowledge knowledge = Knowledge::local;
  maxsum::WorkloadParams workload;
  int iterations = 5;
  int exact_path_limit = 6;

  void validate() const;

  /// Accepts d-independent, c-independent, d-workload, c-workload,
  /// psi-auction, c-hungarian and c-greedy.
  static AllocatorConfig parse(std::string_view name);
  std::string name() const;
};

Assignment allocate_independent(const AllocationProblem& problem);

/// Announce / bid / winner-determination protocol of parallel single-item
/// auctions, lowest bid wins.
Assignment psi_auction(const AllocationProblem& problem);

/// Loopy min-sum over plane workload factors and request selection factors,
/// `iterations` synchronous rounds starting from zero messages.
Assignment allocate_workload(const AllocationProblem& problem,
                             const maxsum::WorkloadParams& params, int iterations);

/// Request x plane assignment with forbidden non-candidate pairs. Requests
/// left unmatched keep their owner.
Assignment allocate_hungarian(const AllocationProblem& problem);

inline constexpr double kForbiddenCost = 1e15;

struct GreedyStep {
  PlaneId plane{};
  RequestId request{};
  double cost = 0.0;
  // Visiting order of every plane before this step was applied.
  const std::map<PlaneId, std::vector<Location>>* paths = nullptr;
  // Requests still unallocated before this step, ascending.
  const std::vector<RequestId>* remaining = nullptr;
};

using GreedyObserver = std::function<void(const GreedyStep&)>;

/// Sequential single-item allocation with min-path bids.
Assignment allocate_greedy_ssi(const AllocationProblem& problem, int exact_limit,
                               const GreedyObserver& observer = {});

Assignment allocate(const AllocationProblem& problem, const AllocatorConfig& config);

}  // namespace lorp
