#include "lorp/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "lorp/errors.hpp"

namespace lorp {

namespace {

constexpr double kReachSlack = 1e-9;

std::size_t nearest_operator(const SimState& state, Location at) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t o = 0; o < state.operators.size(); ++o) {
    const double d = distance(state.operators[o].location, at);
    if (d < best_d) {
      best_d = d;
      best = o;
    }
  }
  return best;
}

Knowledge effective_knowledge(const SimConfig& config) {
  return config.allocator.knowledge == Knowledge::global ? config.centralized_knowledge
                                                         : Knowledge::local;
}

}  // namespace

void SimConfig::validate() const {
  allocator.validate();
  if (!(dt > 0.0)) {
    throw precondition_error("sim: dt must be positive");
  }
  if (!(realloc_period >= dt)) {
    throw precondition_error("sim: realloc_period must be >= dt");
  }
  const double ratio = realloc_period / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    throw precondition_error("sim: realloc_period must be a multiple of dt");
  }
  if (!(duration > 0.0)) {
    throw precondition_error("sim: duration must be positive");
  }
  if (!(speed > 0.0)) {
    throw precondition_error("sim: speed must be positive");
  }
  if (!(grace_factor >= 1.0)) {
    throw precondition_error("sim: grace_factor must be >= 1");
  }
}

long long SimConfig::realloc_ticks() const { return std::llround(realloc_period / dt); }

SimConfig make_sim_config(const Scenario& scenario, const AllocatorConfig& allocator) {
  SimConfig config;
  config.allocator = allocator;
  config.duration = scenario.config.duration;
  config.speed = scenario.config.speed;
  return config;
}

SimState initial_state(const Scenario& scenario) {
  SimState state;
  for (std::size_t i = 0; i < scenario.plane_starts.size(); ++i) {
    PlaneState p;
    p.id = PlaneId{static_cast<std::uint32_t>(i)};
    p.location = scenario.plane_starts[i];
    p.speed = scenario.config.speed;
    p.comm_range = scenario.config.comm_range;
    state.planes.push_back(std::move(p));
  }
  for (std::size_t i = 0; i < scenario.operator_locations.size(); ++i) {
    OperatorState o;
    o.id = OperatorId{static_cast<std::uint32_t>(i)};
    o.location = scenario.operator_locations[i];
    o.comm_range = scenario.config.comm_range;
    state.operators.push_back(std::move(o));
  }
  state.requests = scenario.requests;
  state.owner.assign(state.requests.size(), std::nullopt);
  state.records.reserve(state.requests.size());
  for (const auto& r : state.requests) {
    state.records.push_back({r.id, r.t_submitted, std::nullopt, std::nullopt, std::nullopt});
  }
  return state;
}

void inject(SimState& state, RequestId r, PlaneId p) {
  const auto ri = to_index(r);
  const auto pi = to_index(p);
  if (ri >= state.requests.size() || pi >= state.planes.size()) {
    throw malformed_snapshot("inject: unknown request or plane");
  }
  if (state.owner[ri] || state.records[ri].serviced()) {
    throw malformed_snapshot("inject: request " + std::to_string(ri) + " already handed out");
  }
  state.owner[ri] = p;
  state.planes[pi].owned.insert(r);
  state.records[ri].t_injected = state.clock;
  ++state.owned_pending;
}

Location movement_target(const PlaneState& plane, const SimState& state) {
  if (!plane.owned.empty()) {
    // std::set iterates ids ascending, so strict < keeps the lowest id on ties.
    double best_d = std::numeric_limits<double>::infinity();
    Location best{};
    for (const auto r : plane.owned) {
      const Location at = state.requests[to_index(r)].location;
      const double d = distance(plane.location, at);
      if (d < best_d) {
        best_d = d;
        best = at;
      }
    }
    return best;
  }
  if (state.operators.empty()) {
    return plane.location;
  }
  return state.operators[nearest_operator(state, plane.location)].location;
}

AllocationProblem snapshot_problem(const SimState& state, const CommGraph& graph,
                                   Knowledge knowledge) {
  std::vector<PlaneSnapshot> planes;
  planes.reserve(state.planes.size());
  std::vector<PlaneId> everyone;
  for (const auto& p : state.planes) {
    planes.push_back({p.id, p.location});
    everyone.push_back(p.id);
  }
  std::map<RequestId, PlaneId> owner;
  std::map<RequestId, Location> locations;
  std::map<RequestId, std::vector<PlaneId>> candidates;
  for (const auto& plane : state.planes) {
    for (const auto r : plane.owned) {
      owner.emplace(r, plane.id);
      locations.emplace(r, state.requests[to_index(r)].location);
      if (knowledge == Knowledge::global) {
        candidates.emplace(r, everyone);
      } else {
        const auto adj = neighbors(graph, plane.id);
        std::vector<PlaneId> cands(adj.begin(), adj.end());
        cands.push_back(plane.id);
        candidates.emplace(r, std::move(cands));
      }
    }
  }
  return make_problem(std::move(planes), std::move(owner), std::move(locations),
                      std::move(candidates));
}

void reallocation_cycle(SimState& state, const SimConfig& config) {
  ++state.cycles;
  if (state.owned_pending == 0) {
    return;
  }
  const auto graph = build_comm_graph(state.planes, {});
  const auto problem = snapshot_problem(state, graph, effective_knowledge(config));
  const auto assignment = allocate(problem, config.allocator);
  check_assignment(problem, assignment);
  for (const auto& [r, target] : assignment) {
    const auto ri = to_index(r);
    const PlaneId from = *state.owner[ri];
    if (from == target) {
      continue;
    }
    state.planes[to_index(from)].owned.erase(r);
    state.planes[to_index(target)].owned.insert(r);
    state.owner[ri] = target;
    ++state.transfers;
  }
}

void step(SimState& state, const SimConfig& config) {
  // (a) submissions reach the operator nearest to the request.
  while (state.next_submission < state.requests.size() &&
         state.requests[state.next_submission].t_submitted <= state.clock) {
    const auto& r = state.requests[state.next_submission];
    if (!state.operators.empty()) {
      state.operators[nearest_operator(state, r.location)].pending_queue.push_back(r.id);
      ++state.queued;
    }
    ++state.next_submission;
  }

  // (b) operators hand their queue to the nearest plane in range.
  for (auto& op : state.operators) {
    if (op.pending_queue.empty()) {
      continue;
    }
    std::optional<PlaneId> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& plane : state.planes) {
      const double d = distance(op.location, plane.location);
      if (d <= std::min(op.comm_range, plane.comm_range) && d < best_d) {
        best_d = d;
        best = plane.id;
      }
    }
    if (!best) {
      continue;
    }
    while (!op.pending_queue.empty()) {
      inject(state, op.pending_queue.front(), *best);
      op.pending_queue.pop_front();
      --state.queued;
    }
  }

  // (c) movement and (d) servicing of whatever is reachable this tick.
  for (auto& plane : state.planes) {
    const Location start = plane.location;
    const double reach = plane.speed * config.dt;
    plane.location = advance_toward(start, movement_target(plane, state), reach);

    std::vector<std::pair<double, RequestId>> reachable;
    for (const auto r : plane.owned) {
      const double d = distance(start, state.requests[to_index(r)].location);
      if (d <= reach + kReachSlack) {
        reachable.emplace_back(d, r);
      }
    }
    std::sort(reachable.begin(), reachable.end());
    for (const auto& [d, r] : reachable) {
      const auto ri = to_index(r);
      plane.location = state.requests[ri].location;
      plane.owned.erase(r);
      state.owner[ri].reset();
      auto& rec = state.records[ri];
      rec.t_serviced = state.clock + d / plane.speed;
      rec.plane = plane.id;
      --state.owned_pending;
      ++state.serviced;
    }
  }

  // (e) reallocation at cycle boundaries.
  if ((state.tick + 1) % config.realloc_ticks() == 0) {
    reallocation_cycle(state, config);
  }

  // (f)
  ++state.tick;
  state.clock = static_cast<double>(state.tick) * config.dt;

  if (config.check_invariants) {
    check_state_invariants(state);
  }
}

void check_state_invariants(const SimState& state) {
  const auto fail = [](const std::string& what) { throw std::logic_error("sim invariant: " + what); };

  if (state.submitted() != state.queued + state.owned_pending + state.serviced) {
    fail("submitted != queued + owned + serviced");
  }
  std::size_t queued = 0;
  for (const auto& op : state.operators) {
    queued += op.pending_queue.size();
    for (std::size_t i = 1; i < op.pending_queue.size(); ++i) {
      if (state.requests[to_index(op.pending_queue[i])].t_submitted <
          state.requests[to_index(op.pending_queue[i - 1])].t_submitted) {
        fail("operator queue not sorted by submission time");
      }
    }
  }
  if (queued != state.queued) {
    fail("queued counter mismatch");
  }
  std::vector<int> seen(state.requests.size(), 0);
  std::size_t owned = 0;
  for (const auto& plane : state.planes) {
    for (const auto r : plane.owned) {
      const auto ri = to_index(r);
      if (++seen[ri] > 1) {
        fail("request " + std::to_string(ri) + " owned twice");
      }
      if (state.owner[ri] != plane.id) {
        fail("owner table disagrees with owned sets");
      }
      ++owned;
    }
  }
  if (owned != state.owned_pending) {
    fail("owned counter mismatch");
  }
  for (const auto& rec : state.records) {
    if (rec.t_injected && *rec.t_injected < rec.t_submitted) {
      fail("injected before submission");
    }
    if (rec.t_serviced && (!rec.t_injected || *rec.t_serviced < *rec.t_injected)) {
      fail("serviced before injection");
    }
  }
}

RunResult run(const Scenario& scenario, const SimConfig& config, std::uint64_t seed) {
  config.validate();
  scenario.validate();
  SimState state = initial_state(scenario);
  for (auto& plane : state.planes) {
    plane.speed = config.speed;
  }

  const auto horizon_ticks = static_cast<long long>(std::ceil(config.duration / config.dt - 1e-9));
  const auto cap_ticks =
      static_cast<long long>(std::ceil(config.grace_factor * config.duration / config.dt - 1e-9));
  while (state.tick < horizon_ticks) {
    step(state, config);
  }
  while (!state.idle() && state.tick < cap_ticks) {
    step(state, config);
  }

  RunResult result;
  result.records = std::move(state.records);
  auto& s = result.summary;
  s.requests = result.records.size();
  s.serviced = state.serviced;
  s.unserviced = s.requests - s.serviced;
  s.transfers = state.transfers;
  s.cycles = state.cycles;
  s.end_clock = state.clock;
  s.cap_reached = !state.idle();
  s.seed = seed;
  return result;
}

}  // namespace lorp
