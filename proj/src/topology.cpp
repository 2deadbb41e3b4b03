#include "gbrsim/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>
#include <unordered_map>

#include "gbrsim/errors.hpp"

namespace gbr {

double squared_distance(Point a, Point b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

namespace {

bool finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

std::int64_t cell_key(std::int64_t cx, std::int64_t cy) { return (cx << 32) ^ (cy & 0xffffffff); }

}  // namespace

Deployment deploy_uniform_disc(std::size_t n_sensors, double radius,
                               std::vector<Point> bs_positions, std::uint64_t seed) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidArgument("deployment radius must be positive and finite");
  }
  if (bs_positions.empty()) {
    throw InvalidArgument("at least one base station is required");
  }
  if (!std::all_of(bs_positions.begin(), bs_positions.end(), finite)) {
    throw InvalidArgument("base station coordinates must be finite");
  }

  Deployment d;
  d.radius = radius;
  d.seed = seed;
  d.base_stations = std::move(bs_positions);
  d.sensors.reserve(n_sensors);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (std::size_t i = 0; i < n_sensors; ++i) {
    const double r = radius * std::sqrt(unit(rng));
    const double theta = angle(rng);
    Point p{r * std::cos(theta), r * std::sin(theta)};
    // cos/sin rounding can push a boundary point a hair outside the disc.
    if (squared_distance(p, {}) > radius * radius) {
      const double scale = radius / std::sqrt(squared_distance(p, {}));
      p = {p.x * scale, p.y * scale};
      if (squared_distance(p, {}) > radius * radius) {
        p = {std::nextafter(p.x, 0.0), std::nextafter(p.y, 0.0)};
      }
    }
    d.sensors.push_back(p);
  }
  return d;
}

std::vector<int> compute_heights(std::span<const std::vector<NodeId>> adjacency,
                                 std::span<const std::vector<std::uint32_t>> bs_adjacency) {
  const std::size_t n = adjacency.size();
  std::vector<int> heights(n, kUnreachable);
  std::deque<NodeId> frontier;
  for (NodeId i = 0; i < n; ++i) {
    if (i < bs_adjacency.size() && !bs_adjacency[i].empty()) {
      heights[i] = 1;
      frontier.push_back(i);
    }
  }
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop_front();
    for (NodeId v : adjacency[u]) {
      if (heights[v] == kUnreachable) {
        heights[v] = heights[u] + 1;
        frontier.push_back(v);
      }
    }
  }
  return heights;
}

Topology build_topology(Deployment deployment, double comm_radius) {
  if (!(comm_radius > 0.0) || !std::isfinite(comm_radius)) {
    throw InvalidArgument("comm_radius must be positive and finite");
  }
  for (const auto& p : deployment.sensors) {
    if (!finite(p)) throw InvalidArgument("sensor coordinates must be finite");
  }

  Topology t;
  t.comm_radius_ = comm_radius;
  const auto& sensors = deployment.sensors;
  const auto& stations = deployment.base_stations;
  const std::size_t n = sensors.size();
  const double r2 = comm_radius * comm_radius;

  // Bucket sensors into comm_radius-sized cells; candidates live in the 3x3 block.
  auto cell_of = [comm_radius](Point p) {
    return std::pair<std::int64_t, std::int64_t>{static_cast<std::int64_t>(std::floor(p.x / comm_radius)),
                                                 static_cast<std::int64_t>(std::floor(p.y / comm_radius))};
  };
  std::unordered_map<std::int64_t, std::vector<NodeId>> cells;
  for (NodeId i = 0; i < n; ++i) {
    const auto [cx, cy] = cell_of(sensors[i]);
    cells[cell_key(cx, cy)].push_back(i);
  }

  t.adjacency_.assign(n, {});
  for (NodeId i = 0; i < n; ++i) {
    const auto [cx, cy] = cell_of(sensors[i]);
    auto& out = t.adjacency_[i];
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        const auto it = cells.find(cell_key(cx + dx, cy + dy));
        if (it == cells.end()) continue;
        for (NodeId j : it->second) {
          if (j != i && squared_distance(sensors[i], sensors[j]) <= r2) out.push_back(j);
        }
      }
    }
    std::sort(out.begin(), out.end());
  }

  t.bs_adjacency_.assign(n, {});
  for (NodeId i = 0; i < n; ++i) {
    for (std::uint32_t b = 0; b < stations.size(); ++b) {
      if (squared_distance(sensors[i], stations[b]) <= r2) t.bs_adjacency_[i].push_back(b);
    }
  }

  t.heights_ = compute_heights(t.adjacency_, t.bs_adjacency_);
  for (NodeId i = 0; i < n; ++i) {
    if (t.heights_[i] != kUnreachable) {
      t.reachable_.push_back(i);
      t.max_height_ = std::max(t.max_height_, t.heights_[i]);
    }
  }
  t.deployment_ = std::move(deployment);
  return t;
}

std::optional<std::uint32_t> Topology::delivery_station(NodeId n) const {
  const auto& in_range = bs_adjacency_.at(n);
  if (in_range.empty()) return std::nullopt;
  const Point p = deployment_.sensors[n];
  std::uint32_t best = in_range.front();
  double best_d = squared_distance(p, deployment_.base_stations[best]);
  for (std::uint32_t b : in_range) {
    const double d = squared_distance(p, deployment_.base_stations[b]);
    if (d < best_d) {
      best = b;
      best_d = d;
    }
  }
  return best;
}

namespace {

nlohmann::json points_to_json(const std::vector<Point>& pts) {
  auto arr = nlohmann::json::array();
  for (const auto& p : pts) arr.push_back({p.x, p.y});
  return arr;
}

std::vector<Point> points_from_json(const nlohmann::json& arr, const char* what) {
  if (!arr.is_array()) throw InvalidArgument(std::string(what) + " must be an array of [x, y]");
  std::vector<Point> pts;
  pts.reserve(arr.size());
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw InvalidArgument(std::string(what) + " entries must be [x, y] pairs");
    }
    pts.push_back({e[0].get<double>(), e[1].get<double>()});
  }
  return pts;
}

}  // namespace

nlohmann::json topology_to_json(const Topology& topology) {
  const auto& d = topology.deployment();
  nlohmann::json doc;
  doc["format"] = "gbrsim-topology";
  doc["version"] = 1;
  doc["radius"] = d.radius;
  doc["seed"] = d.seed;
  doc["comm_radius"] = topology.comm_radius();
  doc["base_stations"] = points_to_json(d.base_stations);
  doc["sensors"] = points_to_json(d.sensors);
  doc["heights"] = topology.heights();
  return doc;
}

Topology topology_from_json(const nlohmann::json& doc) {
  try {
    if (doc.value("format", "") != "gbrsim-topology") {
      throw InvalidArgument("not a gbrsim topology document");
    }
    Deployment d;
    d.radius = doc.at("radius").get<double>();
    d.seed = doc.at("seed").get<std::uint64_t>();
    d.base_stations = points_from_json(doc.at("base_stations"), "base_stations");
    d.sensors = points_from_json(doc.at("sensors"), "sensors");
    if (d.base_stations.empty()) throw InvalidArgument("at least one base station is required");
    return build_topology(std::move(d), doc.at("comm_radius").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed topology JSON: ") + e.what());
  }
}

}  // namespace gbr
