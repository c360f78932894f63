#include "lorp/allocators.hpp"

#include <algorithm>
#include <iterator>
#include <limits>
#include <optional>
#include <string>

#include "lorp/errors.hpp"
#include "lorp/hungarian.hpp"
#include "lorp/min_path.hpp"

namespace lorp {

namespace {

std::string id_str(PlaneId p) { return std::to_string(to_index(p)); }
std::string id_str(RequestId r) { return std::to_string(to_index(r)); }

bool contains_sorted(const std::vector<PlaneId>& v, PlaneId p) {
  return std::binary_search(v.begin(), v.end(), p);
}

}  // namespace

Location AllocationProblem::plane_location(PlaneId id) const {
  const auto it = std::lower_bound(planes.begin(), planes.end(), id,
                                   [](const PlaneSnapshot& s, PlaneId v) { return s.id < v; });
  if (it == planes.end() || it->id != id) {
    throw malformed_snapshot("unknown plane " + id_str(id));
  }
  return it->location;
}

Location AllocationProblem::request_location(RequestId id) const {
  const auto it = request_locations.find(id);
  if (it == request_locations.end()) {
    throw malformed_snapshot("unknown request " + id_str(id));
  }
  return it->second;
}

void AllocationProblem::validate() const {
  for (std::size_t i = 1; i < planes.size(); ++i) {
    if (!(planes[i - 1].id < planes[i].id)) {
      throw malformed_snapshot("planes must be sorted by id and unique");
    }
  }
  if (owner.size() != request_locations.size() || owner.size() != candidates.size()) {
    throw malformed_snapshot("owner, locations and candidates cover different requests");
  }
  for (const auto& [r, cands] : candidates) {
    if (cands.empty()) {
      throw malformed_snapshot("request " + id_str(r) + " has no candidates");
    }
    if (!std::is_sorted(cands.begin(), cands.end()) ||
        std::adjacent_find(cands.begin(), cands.end()) != cands.end()) {
      throw malformed_snapshot("candidates of request " + id_str(r) + " not sorted/unique");
    }
    const auto own = owner.find(r);
    if (own == owner.end() || !contains_sorted(cands, own->second)) {
      throw malformed_snapshot("owner of request " + id_str(r) + " is not a candidate");
    }
    if (!request_locations.contains(r)) {
      throw malformed_snapshot("request " + id_str(r) + " has no location");
    }
    for (const auto p : cands) {
      (void)plane_location(p);
      const auto k = knows.find(p);
      if (k == knows.end() || !std::binary_search(k->second.begin(), k->second.end(), r)) {
        throw malformed_snapshot("knows is not the transpose of candidates");
      }
    }
  }
  for (const auto& [p, reqs] : knows) {
    for (const auto r : reqs) {
      const auto c = candidates.find(r);
      if (c == candidates.end() || !contains_sorted(c->second, p)) {
        throw malformed_snapshot("knows is not the transpose of candidates");
      }
    }
  }
}

AllocationProblem make_problem(std::vector<PlaneSnapshot> planes,
                               std::map<RequestId, PlaneId> owner,
                               std::map<RequestId, Location> request_locations,
                               std::map<RequestId, std::vector<PlaneId>> candidates) {
  AllocationProblem problem;
  std::sort(planes.begin(), planes.end(),
            [](const PlaneSnapshot& a, const PlaneSnapshot& b) { return a.id < b.id; });
  problem.planes = std::move(planes);
  for (const auto& [r, p] : owner) {
    candidates.try_emplace(r);
  }
  for (auto& [r, cands] : candidates) {
    if (const auto own = owner.find(r); own != owner.end()) {
      cands.push_back(own->second);
    }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    for (const auto p : cands) {
      problem.knows[p].push_back(r);
    }
  }
  problem.owner = std::move(owner);
  problem.request_locations = std::move(request_locations);
  problem.candidates = std::move(candidates);
  problem.validate();
  return problem;
}

void check_assignment(const AllocationProblem& problem, const Assignment& assignment) {
  if (assignment.size() != problem.candidates.size()) {
    throw malformed_snapshot("assignment is not total");
  }
  for (const auto& [r, cands] : problem.candidates) {
    const auto it = assignment.find(r);
    if (it == assignment.end()) {
      throw malformed_snapshot("request " + id_str(r) + " unassigned");
    }
    if (!contains_sorted(cands, it->second)) {
      throw malformed_snapshot("request " + id_str(r) + " assigned to non-candidate plane " +
                               id_str(it->second));
    }
  }
}

void AllocatorConfig::validate() const {
  workload.validate();
  if (iterations < 1) {
    throw precondition_error("allocator iterations must be >= 1");
  }
  if (exact_path_limit < 1) {
    throw precondition_error("allocator exact_path_limit must be >= 1");
  }
}

AllocatorConfig AllocatorConfig::parse(std::string_view name) {
  AllocatorConfig config;
  if (name == "d-independent") {
    config.method = Method::independent;
  } else if (name == "c-independent") {
    config.method = Method::independent;
    config.knowledge = Knowledge::global;
  } else if (name == "d-workload") {
    config.method = Method::workload;
  } else if (name == "c-workload") {
    config.method = Method::workload;
    config.knowledge = Knowledge::global;
  } else if (name == "psi-auction") {
    config.method = Method::psi_auction;
  } else if (name == "c-hungarian") {
    config.method = Method::hungarian;
    config.knowledge = Knowledge::global;
  } else if (name == "c-greedy") {
    config.method = Method::greedy;
    config.knowledge = Knowledge::global;
  } else {
    throw precondition_error("unknown allocator '" + std::string(name) + "'");
  }
  return config;
}

std::string AllocatorConfig::name() const {
  const std::string prefix = knowledge == Knowledge::global ? "c-" : "d-";
  switch (method) {
    case Method::independent:
      return prefix + "independent";
    case Method::workload:
      return prefix + "workload";
    case Method::psi_auction:
      return knowledge == Knowledge::global ? "c-psi-auction" : "psi-auction";
    case Method::hungarian:
      return prefix + "hungarian";
    case Method::greedy:
      return prefix + "greedy";
  }
  return "unknown";
}

Assignment allocate_independent(const AllocationProblem& problem) {
  Assignment out;
  for (const auto& [r, cands] : problem.candidates) {
    const Location at = problem.request_location(r);
    maxsum::SelectionInputs selection;
    selection.incoming.reserve(cands.size());
    for (const auto p : cands) {
      selection.incoming.emplace_back(
          p, maxsum::cost_to_selection(distance(problem.plane_location(p), at)));
    }
    out.emplace(r, maxsum::selection_decide(selection));
  }
  return out;
}

Assignment psi_auction(const AllocationProblem& problem) {
  struct Announcement {
    RequestId request;
    PlaneId auctioneer;
  };
  struct Bid {
    RequestId request;
    PlaneId bidder;
    double value;
  };

  // t: owners announce every request they hold to the planes in range.
  std::map<PlaneId, std::vector<Announcement>> inbox;
  for (const auto& [r, owner] : problem.owner) {
    for (const auto p : problem.candidates.at(r)) {
      inbox[p].push_back({r, owner});
    }
  }

  // t+1: every plane bids its distance on each auction it hears.
  std::map<PlaneId, std::vector<Bid>> bids_received;
  for (const auto& [p, announcements] : inbox) {
    const Location here = problem.plane_location(p);
    for (const auto& a : announcements) {
      bids_received[a.auctioneer].push_back(
          {a.request, p, distance(here, problem.request_location(a.request))});
    }
  }

  // t+2: auctioneers determine winners; t+3: winners take ownership.
  Assignment out;
  for (const auto& [auctioneer, bids] : bids_received) {
    std::map<RequestId, Bid> best;
    for (const auto& bid : bids) {
      auto [it, inserted] = best.try_emplace(bid.request, bid);
      if (!inserted && (bid.value < it->second.value ||
                        (bid.value == it->second.value && bid.bidder < it->second.bidder))) {
        it->second = bid;
      }
    }
    for (const auto& [r, bid] : best) {
      out[r] = bid.bidder;
    }
  }
  return out;
}

Assignment allocate_workload(const AllocationProblem& problem,
                             const maxsum::WorkloadParams& params, int iterations) {
  params.validate();
  if (iterations < 1) {
    throw precondition_error("allocate_workload: iterations must be >= 1");
  }

  // Latest message on each edge, indexed like problem.candidates[r].
  struct Edges {
    std::vector<PlaneId> planes;
    std::vector<double> to_selection;
    std::vector<double> to_plane;
  };
  std::map<RequestId, Edges> edges;
  for (const auto& [r, cands] : problem.candidates) {
    edges.emplace(r, Edges{cands, std::vector<double>(cands.size(), 0.0),
                           std::vector<double>(cands.size(), 0.0)});
  }
  const auto slot = [&](const Edges& e, PlaneId p) {
    return static_cast<std::size_t>(
        std::lower_bound(e.planes.begin(), e.planes.end(), p) - e.planes.begin());
  };

  // Distances are fixed for the snapshot.
  std::map<PlaneId, std::vector<double>> deltas;
  for (const auto& [p, reqs] : problem.knows) {
    const Location here = problem.plane_location(p);
    auto& d = deltas[p];
    d.reserve(reqs.size());
    for (const auto r : reqs) {
      d.push_back(distance(here, problem.request_location(r)));
    }
  }

  std::vector<maxsum::NuMessage> outbox;
  for (int round = 0; round < iterations; ++round) {
    outbox.clear();
    for (const auto& [p, reqs] : problem.knows) {
      if (reqs.empty()) {
        continue;
      }
      maxsum::PlaneFactorInputs factor;
      factor.deltas = deltas.at(p);
      factor.params = params;
      factor.incoming.reserve(reqs.size());
      for (const auto r : reqs) {
        const auto& e = edges.at(r);
        factor.incoming.push_back(e.to_plane[slot(e, p)]);
      }
      const auto nu = maxsum::workload_factor_messages(factor);
      for (std::size_t i = 0; i < reqs.size(); ++i) {
        outbox.push_back({nu[i], maxsum::Direction::cost_to_selection, reqs[i], p});
      }
    }
    for (const auto& msg : outbox) {
      auto& e = edges.at(msg.request);
      e.to_selection[slot(e, msg.plane)] = msg.value;
    }

    for (auto& [r, e] : edges) {
      maxsum::SelectionInputs selection;
      selection.incoming.reserve(e.planes.size());
      for (std::size_t i = 0; i < e.planes.size(); ++i) {
        selection.incoming.emplace_back(e.planes[i], e.to_selection[i]);
      }
      e.to_plane = maxsum::selection_to_costs(selection);
    }
  }

  Assignment out;
  for (const auto& [r, e] : edges) {
    maxsum::SelectionInputs selection;
    for (std::size_t i = 0; i < e.planes.size(); ++i) {
      selection.incoming.emplace_back(e.planes[i], e.to_selection[i]);
    }
    out.emplace(r, maxsum::selection_decide(selection));
  }
  return out;
}

Assignment allocate_hungarian(const AllocationProblem& problem) {
  std::vector<RequestId> rows;
  rows.reserve(problem.candidates.size());
  for (const auto& [r, cands] : problem.candidates) {
    rows.push_back(r);
  }
  const std::size_t n_rows = rows.size();
  const std::size_t n_cols = problem.planes.size();

  std::vector<double> cost(n_rows * n_cols, kForbiddenCost);
  for (std::size_t i = 0; i < n_rows; ++i) {
    const Location at = problem.request_location(rows[i]);
    const auto& cands = problem.candidates.at(rows[i]);
    for (std::size_t j = 0; j < n_cols; ++j) {
      if (contains_sorted(cands, problem.planes[j].id)) {
        cost[i * n_cols + j] = distance(problem.planes[j].location, at);
      }
    }
  }

  const auto matching = hungarian_solve(cost, n_rows, n_cols);
  Assignment out;
  for (std::size_t i = 0; i < n_rows; ++i) {
    const auto& col = matching.row_to_col[i];
    const bool usable = col && cost[i * n_cols + *col] < kForbiddenCost;
    out.emplace(rows[i], usable ? problem.planes[*col].id : problem.owner.at(rows[i]));
  }
  return out;
}

Assignment allocate_greedy_ssi(const AllocationProblem& problem, int exact_limit,
                               const GreedyObserver& observer) {
  if (exact_limit < 1) {
    throw precondition_error("allocate_greedy_ssi: exact_limit must be >= 1");
  }
  const auto limit = static_cast<std::size_t>(exact_limit);

  std::vector<RequestId> remaining;
  for (const auto& [r, cands] : problem.candidates) {
    remaining.push_back(r);
  }

  std::map<PlaneId, std::vector<Location>> paths;
  // Cached bid of each plane for each request it knows; refreshed only for the
  // plane whose path changed.
  std::map<PlaneId, std::map<RequestId, PathBid>> bids;
  const auto refresh = [&](PlaneId p) {
    auto& mine = bids[p];
    mine.clear();
    const Location start = problem.plane_location(p);
    const auto& path = paths[p];
    for (const auto r : problem.knows.at(p)) {
      if (std::binary_search(remaining.begin(), remaining.end(), r)) {
        mine.emplace(r, plan_min_path(start, path, problem.request_location(r), limit));
      }
    }
  };
  for (const auto& [p, reqs] : problem.knows) {
    refresh(p);
  }

  Assignment out;
  while (!remaining.empty()) {
    std::optional<std::pair<PlaneId, RequestId>> best;
    double best_cost = std::numeric_limits<double>::infinity();
    for (const auto& [p, mine] : bids) {
      for (const auto& [r, bid] : mine) {
        if (bid.length < best_cost) {
          best_cost = bid.length;
          best = {p, r};
        }
      }
    }
    if (!best) {
      throw malformed_snapshot("greedy allocation: request without eligible plane");
    }
    const auto [p, r] = *best;
    if (observer) {
      observer(GreedyStep{p, r, best_cost, &paths, &remaining});
    }
    paths[p] = bids[p].at(r).order;
    out.emplace(r, p);
    remaining.erase(std::lower_bound(remaining.begin(), remaining.end(), r));
    for (auto& [q, mine] : bids) {
      mine.erase(r);
    }
    refresh(p);
  }
  return out;
}

Assignment allocate(const AllocationProblem& problem, const AllocatorConfig& config) {
  config.validate();
  switch (config.method) {
    case Method::independent:
      return allocate_independent(problem);
    case Method::workload:
      return allocate_workload(problem, config.workload, config.iterations);
    case Method::psi_auction:
      return psi_auction(problem);
    case Method::hungarian:
      return allocate_hungarian(problem);
    case Method::greedy:
      return allocate_greedy_ssi(problem, config.exact_path_limit);
  }
  throw precondition_error("unknown allocation method");
}

}  // namespace lorp
