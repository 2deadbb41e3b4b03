#include "gbrsim/protocols.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gbrsim/errors.hpp"

namespace gbr {

std::string_view to_string(RoutingDecision::Kind kind) noexcept {
  switch (kind) {
    case RoutingDecision::Kind::Forward:
      return "forward";
    case RoutingDecision::Kind::Sink:
      return "sink";
    case RoutingDecision::Kind::Direct:
      return "direct";
  }
  return "?";
}

std::string_view to_string(PotentialVariant v) noexcept {
  return v == PotentialVariant::Cubic ? "cubic" : "cumulative-sum";
}

PotentialVariant potential_variant_from_string(std::string_view s) {
  if (s == "cumulative-sum") return PotentialVariant::CumulativeSquares;
  if (s == "cubic") return PotentialVariant::Cubic;
  throw InvalidArgument("unknown potential variant '" + std::string(s) + "' (expected cumulative-sum or cubic)");
}

DirectProbabilities::DirectProbabilities(std::vector<double> by_height) : p_(std::move(by_height)) {
  for (double v : p_) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("direct probabilities must lie in [0, 1]");
  }
}

double DirectProbabilities::at(int height) const {
  if (!covers(height)) {
    throw InvalidArgument("no direct probability for height " + std::to_string(height));
  }
  return p_[static_cast<std::size_t>(height - 1)];
}

nlohmann::json probabilities_to_json(const DirectProbabilities& p) {
  return {{"format", "gbrsim-direct-probabilities"}, {"first_height", 1}, {"probabilities", p.values()}};
}

DirectProbabilities probabilities_from_json(const nlohmann::json& doc) {
  try {
    if (doc.is_array()) return DirectProbabilities(doc.get<std::vector<double>>());
    if (doc.value("first_height", 1) != 1) throw InvalidArgument("probabilities must start at height 1");
    return DirectProbabilities(doc.at("probabilities").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed probabilities JSON: ") + e.what());
  }
}

std::uint64_t static_potential(int height) {
  if (height < 0) throw InvalidArgument("height must be non-negative");
  const auto h = static_cast<std::uint64_t>(height);
  return h * (h + 1) * (2 * h + 1) / 6;
}

double static_potential(int height, PotentialVariant variant) {
  if (variant == PotentialVariant::Cubic) {
    if (height < 0) throw InvalidArgument("height must be non-negative");
    const auto h = static_cast<double>(height);
    return h * h * h;
  }
  return static_cast<double>(static_potential(height));
}

double node_potential(const NodeSnapshot& node, const ProtocolParams& params) {
  return static_potential(node.height, params.potential) + params.epsilon_scale * node.energy_spent;
}

RoutingDecision mixed_gbr_decide(const NodeSnapshot& self, std::span<const NodeSnapshot> neighbors,
                                 const ProtocolParams& params) {
  if (self.height == 1) return RoutingDecision::sink();
  if (self.height < 1) {
    throw RoutingFault("node " + std::to_string(self.id) + " has no finite height and cannot route");
  }
  if (neighbors.empty()) return RoutingDecision::direct();

  const NodeSnapshot* best = nullptr;
  double best_pot = std::numeric_limits<double>::infinity();
  for (const auto& nb : neighbors) {
    const double pot = node_potential(nb, params);
    if (best == nullptr || pot < best_pot || (pot == best_pot && nb.id < best->id)) {
      best = &nb;
      best_pot = pot;
    }
  }
  if (best_pot > node_potential(self, params)) return RoutingDecision::direct();
  return RoutingDecision::forward(best->id);
}

RoutingDecision standard_gbr_decide(const NodeSnapshot& self, std::span<const NodeSnapshot> neighbors) {
  if (self.height == 1) return RoutingDecision::sink();
  if (self.height < 1) {
    throw RoutingFault("node " + std::to_string(self.id) + " has no finite height and cannot route");
  }
  const NodeSnapshot* best = nullptr;
  for (const auto& nb : neighbors) {
    if (nb.height == kUnreachable || nb.height >= self.height) continue;
    if (best == nullptr || nb.energy_spent < best->energy_spent ||
        (nb.energy_spent == best->energy_spent && nb.id < best->id)) {
      best = &nb;
    }
  }
  if (best == nullptr) {
    throw RoutingFault("node " + std::to_string(self.id) + " at height " + std::to_string(self.height) +
                       " has no lower neighbour");
  }
  return RoutingDecision::forward(best->id);
}

double transmission_cost(RoutingDecision decision, int height, double exponent) {
  if (decision.kind != RoutingDecision::Kind::Direct) return 1.0;
  if (height < 1) throw InvalidArgument("direct transmission requires height >= 1");
  if (exponent == 2.0) return static_cast<double>(height) * height;
  return std::pow(static_cast<double>(height), exponent);
}

}  // namespace gbr
