#pragma once

// Fixed-timestep simulation of request injection, periodic reallocation
// cycles and plane movement/servicing.

#include <cstdint>
#include <optional>
#include <vector>

#include "lorp/allocators.hpp"
#include "lorp/model.hpp"
#include "lorp/scenario.hpp"

namespace lorp {

struct SimConfig {
  double dt = 1.0;
  double realloc_period = 10.0;  // a whole number of ticks
  AllocatorConfig allocator;
  // Candidate sets used by centralized (c-*) methods.
  Knowledge centralized_knowledge = Knowledge::global;
  double duration = 0.0;
  double speed = 50.0 * kKmhToMs;
  // Stepping stops at grace_factor * duration even with requests outstanding.
  double grace_factor = 2.0;
  // Verify the state invariants after every tick (slow; for tests).
  bool check_invariants = false;

  void validate() const;
  long long realloc_ticks() const;
};

/// Copies duration and speed from the scenario.
SimConfig make_sim_config(const Scenario& scenario, const AllocatorConfig& allocator);

struct RunRecord {
  RequestId id{};
  double t_submitted = 0.0;
  std::optional<double> t_injected;
  std::optional<double> t_serviced;
  std::optional<PlaneId> plane;

  bool serviced() const { return t_serviced.has_value(); }
  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct SimState {
  double clock = 0.0;
  long long tick = 0;
  std::vector<PlaneState> planes;
  std::vector<OperatorState> operators;
  std::vector<Request> requests;  // full scenario, ascending submission time
  std::size_t next_submission = 0;
  std::vector<std::optional<PlaneId>> owner;  // per request id while pending
  std::vector<RunRecord> records;             // per request id
  std::size_t queued = 0;
  std::size_t owned_pending = 0;
  std::size_t serviced = 0;
  std::size_t transfers = 0;
  std::size_t cycles = 0;

  std::size_t submitted() const { return next_submission; }
  bool idle() const { return next_submission == requests.size() && queued + owned_pending == 0; }
};

SimState initial_state(const Scenario& scenario);

/// Hands request r to plane p: marks injection time and ownership. Used by
/// operators and by scripted test setups.
void inject(SimState& state, RequestId r, PlaneId p);

/// Nearest owned request, else nearest operator; ties by lowest id.
Location movement_target(const PlaneState& plane, const SimState& state);

void step(SimState& state, const SimConfig& config);

void reallocation_cycle(SimState& state, const SimConfig& config);

/// Builds the snapshot the configured allocator sees.
AllocationProblem snapshot_problem(const SimState& state, const CommGraph& graph,
                                   Knowledge knowledge);

/// Throws std::logic_error describing the first broken invariant.
void check_state_invariants(const SimState& state);

struct RunSummary {
  std::size_t requests = 0;
  std::size_t serviced = 0;
  std::size_t unserviced = 0;
  std::size_t transfers = 0;
  std::size_t cycles = 0;
  double end_clock = 0.0;
  bool cap_reached = false;
  std::uint64_t seed = 0;
};

struct RunResult {
  std::vector<RunRecord> records;
  RunSummary summary;
};

/// Steps to the horizon, then keeps stepping without new submissions until
/// every request is serviced or the grace cap is hit.
RunResult run(const Scenario& scenario, const SimConfig& config, std::uint64_t seed);

}  // namespace lorp
