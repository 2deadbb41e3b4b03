#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace gbr {

using NodeId = std::uint32_t;

/// Height of a node with no path to any base station.
inline constexpr int kUnreachable = -1;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double squared_distance(Point a, Point b) noexcept;

struct Deployment {
  std::vector<Point> sensors;
  std::vector<Point> base_stations;
  double radius = 0.0;
  std::uint64_t seed = 0;
};

/// Draws `n_sensors` points i.i.d. uniform over the disc of `radius` centred at
/// the origin (polar sampling with a square-root radial transform).
/// Throws InvalidArgument on non-positive radius or empty station list.
Deployment deploy_uniform_disc(std::size_t n_sensors, double radius,
                               std::vector<Point> bs_positions, std::uint64_t seed);

/// Minimum hop count to any base station by multi-source BFS. Nodes adjacent to
/// a station start at height 1; nodes with no path get kUnreachable.
std::vector<int> compute_heights(std::span<const std::vector<NodeId>> adjacency,
                                 std::span<const std::vector<std::uint32_t>> bs_adjacency);

/// Immutable communication graph over a deployment. Base stations are sinks,
/// not graph nodes: they appear only in the per-node station lists.
class Topology {
 public:
  Topology() = default;

  const Deployment& deployment() const noexcept { return deployment_; }
  double comm_radius() const noexcept { return comm_radius_; }
  std::size_t size() const noexcept { return adjacency_.size(); }

  std::span<const NodeId> neighbors(NodeId n) const { return adjacency_.at(n); }
  /// Stations within comm_radius of `n`, ascending index.
  std::span<const std::uint32_t> stations_in_range(NodeId n) const { return bs_adjacency_.at(n); }
  const std::vector<std::vector<NodeId>>& adjacency() const noexcept { return adjacency_; }
  const std::vector<std::vector<std::uint32_t>>& bs_adjacency() const noexcept { return bs_adjacency_; }

  int height(NodeId n) const { return heights_.at(n); }
  const std::vector<int>& heights() const noexcept { return heights_; }
  bool reachable(NodeId n) const { return heights_.at(n) != kUnreachable; }

  /// Largest finite height, 0 if nothing is reachable.
  int max_height() const noexcept { return max_height_; }
  /// Ascending ids of all nodes with finite height.
  const std::vector<NodeId>& reachable_nodes() const noexcept { return reachable_; }

  /// Station a height-1 node hands its messages to: nearest in range, lowest
  /// index on ties. Empty for nodes not adjacent to a station.
  std::optional<std::uint32_t> delivery_station(NodeId n) const;

  friend Topology build_topology(Deployment deployment, double comm_radius);

 private:
  Deployment deployment_;
  double comm_radius_ = 0.0;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<std::vector<std::uint32_t>> bs_adjacency_;
  std::vector<int> heights_;
  std::vector<NodeId> reachable_;
  int max_height_ = 0;
};

/// Links every pair at Euclidean distance <= comm_radius (closed ball) and
/// fills heights. Neighbor lists are sorted ascending.
Topology build_topology(Deployment deployment, double comm_radius);

/// Serialized form carries the geometry and comm radius; adjacency and heights
/// are rebuilt on load, so a reloaded topology is bit-identical.
nlohmann::json topology_to_json(const Topology& topology);
Topology topology_from_json(const nlohmann::json& doc);

}  // namespace gbr
