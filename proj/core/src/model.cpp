#include "lorp/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lorp/errors.hpp"

namespace lorp {

double distance(Location a, Location b) { return std::hypot(a.x - b.x, a.y - b.y); }

Location advance_toward(Location from, Location to, double step) {
  const double d = distance(from, to);
  if (d <= step) {
    return to;
  }
  const double f = step / d;
  return {from.x + (to.x - from.x) * f, from.y + (to.y - from.y) * f};
}

namespace {

bool linked(Location a, double range_a, Location b, double range_b) {
  return distance(a, b) <= std::min(range_a, range_b);
}

}  // namespace

CommGraph build_comm_graph(std::span<const PlaneState> planes,
                           std::span<const OperatorState> operators) {
  CommGraph graph;
  graph.adjacency.resize(planes.size());
  graph.operator_links.resize(operators.size());

  for (std::size_t i = 0; i < planes.size(); ++i) {
    if (to_index(planes[i].id) != i) {
      throw malformed_snapshot("plane ids must be dense; found id " +
                               std::to_string(to_index(planes[i].id)) + " at index " +
                               std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < operators.size(); ++i) {
    if (to_index(operators[i].id) != i) {
      throw malformed_snapshot("operator ids must be dense");
    }
  }

  for (std::size_t i = 0; i < planes.size(); ++i) {
    for (std::size_t j = i + 1; j < planes.size(); ++j) {
      if (linked(planes[i].location, planes[i].comm_range, planes[j].location,
                 planes[j].comm_range)) {
        graph.adjacency[i].push_back(planes[j].id);
        graph.adjacency[j].push_back(planes[i].id);
      }
    }
  }
  // Pairs are visited with i < j, so lower ids land first; lists stay sorted.
  for (auto& adj : graph.adjacency) {
    std::sort(adj.begin(), adj.end());
  }

  for (std::size_t o = 0; o < operators.size(); ++o) {
    for (const auto& plane : planes) {
      if (linked(operators[o].location, operators[o].comm_range, plane.location,
                 plane.comm_range)) {
        graph.operator_links[o].push_back(plane.id);
      }
    }
  }
  return graph;
}

std::span<const PlaneId> neighbors(const CommGraph& graph, PlaneId p) {
  const auto idx = to_index(p);
  if (idx >= graph.adjacency.size()) {
    throw malformed_snapshot("unknown plane id " + std::to_string(idx) + " in comm graph");
  }
  return graph.adjacency[idx];
}

}  // namespace lorp
