#pragma once

#include <compare>
#include <cstdint>
#include <deque>
#include <functional>
#include <set>
#include <span>
#include <vector>

namespace lorp {

enum class PlaneId : std::uint32_t {};
enum class RequestId : std::uint32_t {};
enum class OperatorId : std::uint32_t {};

constexpr std::uint32_t to_index(PlaneId id) { return static_cast<std::uint32_t>(id); }
constexpr std::uint32_t to_index(RequestId id) { return static_cast<std::uint32_t>(id); }
constexpr std::uint32_t to_index(OperatorId id) { return static_cast<std::uint32_t>(id); }

/// Planar position in meters (x east, y north).
struct Location {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Location&, const Location&) = default;
};

/// Axis-aligned world rectangle [0, width] x [0, height].
struct WorldBounds {
  double width = 0.0;
  double height = 0.0;

  bool contains(Location p) const {
    return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
  }
};

double distance(Location a, Location b);

/// Moves `from` toward `to` by at most `step` meters.
Location advance_toward(Location from, Location to, double step);

struct PlaneState {
  PlaneId id{};
  Location location;
  double speed = 0.0;
  double comm_range = 0.0;
  std::set<RequestId> owned;
};

struct Request {
  RequestId id{};
  Location location;
  double t_submitted = 0.0;
  // Index of the crisis hotspot the request was drawn from; -1 for background.
  std::int32_t hotspot = -1;

  friend bool operator==(const Request&, const Request&) = default;
};

struct OperatorState {
  OperatorId id{};
  Location location;
  double comm_range = 0.0;
  std::deque<RequestId> pending_queue;
};

/// Range-limited links. A link exists only when both endpoints are within
/// each other's range, so every link supports two-way exchange.
struct CommGraph {
  // adjacency[p] lists the planes linked to plane p, ascending, never p.
  std::vector<std::vector<PlaneId>> adjacency;
  // operator_links[o] lists the planes reachable from operator o, ascending.
  std::vector<std::vector<PlaneId>> operator_links;
};

/// Plane ids must be dense: planes[i].id == i. Same for operators.
CommGraph build_comm_graph(std::span<const PlaneState> planes,
                           std::span<const OperatorState> operators);

/// Throws malformed_snapshot for an id outside the graph.
std::span<const PlaneId> neighbors(const CommGraph& graph, PlaneId p);

}  // namespace lorp
