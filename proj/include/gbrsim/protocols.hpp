#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gbrsim/topology.hpp"

namespace gbr {

/// Round-start view of one node, as seen by itself and its neighbours.
struct NodeSnapshot {
  NodeId id = 0;
  int height = 0;
  double energy_spent = 0.0;
  std::uint32_t queue_len = 0;
};

/// Forward: one hop to a sensor neighbour (cost 1).
/// Sink: one hop from a height-1 node to its base station (cost 1).
/// Direct: long-range transmission to the base station (cost height^k).
struct RoutingDecision {
  enum class Kind : std::uint8_t { Forward, Sink, Direct };

  Kind kind = Kind::Sink;
  NodeId target = 0;  // meaningful for Forward only

  static constexpr RoutingDecision forward(NodeId to) noexcept { return {Kind::Forward, to}; }
  static constexpr RoutingDecision sink() noexcept { return {Kind::Sink, 0}; }
  static constexpr RoutingDecision direct() noexcept { return {Kind::Direct, 0}; }

  bool delivers() const noexcept { return kind != Kind::Forward; }

  friend bool operator==(const RoutingDecision&, const RoutingDecision&) = default;
};

std::string_view to_string(RoutingDecision::Kind kind) noexcept;

enum class PotentialVariant : std::uint8_t {
  CumulativeSquares,  // 1^2 + 2^2 + ... + h^2
  Cubic,              // h * h^2
};

std::string_view to_string(PotentialVariant v) noexcept;
PotentialVariant potential_variant_from_string(std::string_view s);

struct ProtocolParams {
  double epsilon_scale = 1.0;
  double direct_cost_exponent = 2.0;
  PotentialVariant potential = PotentialVariant::CumulativeSquares;
};

/// Per-height direct-send probabilities for the randomized strategy.
/// Heights are 1-based; entry h-1 holds p_h.
class DirectProbabilities {
 public:
  DirectProbabilities() = default;
  explicit DirectProbabilities(std::vector<double> by_height);

  double at(int height) const;
  int max_height() const noexcept { return static_cast<int>(p_.size()); }
  const std::vector<double>& values() const noexcept { return p_; }
  bool covers(int height) const noexcept { return height >= 1 && height <= max_height(); }

  friend bool operator==(const DirectProbabilities&, const DirectProbabilities&) = default;

 private:
  std::vector<double> p_;
};

nlohmann::json probabilities_to_json(const DirectProbabilities& p);
DirectProbabilities probabilities_from_json(const nlohmann::json& doc);

/// Sum of i^2 for i = 1..height, i.e. h(h+1)(2h+1)/6.
std::uint64_t static_potential(int height);
double static_potential(int height, PotentialVariant variant);

/// static potential + epsilon_scale * energy spent so far.
double node_potential(const NodeSnapshot& node, const ProtocolParams& params = {});

/// Mixed strategy: hand the message to the lowest-potential neighbour unless
/// that neighbour's potential is strictly above our own, in which case send it
/// directly to the sink. Height-1 nodes see their base station (potential 0)
/// as the lowest neighbour and deliver to it. Ties go to the lowest node id.
RoutingDecision mixed_gbr_decide(const NodeSnapshot& self, std::span<const NodeSnapshot> neighbors,
                                 const ProtocolParams& params = {});

/// Standard GBR: forward to the lower-height neighbour with least energy spent
/// (lowest id on ties); height-1 nodes deliver to the sink. Never Direct.
/// Throws RoutingFault when a node of height >= 2 has no lower neighbour.
RoutingDecision standard_gbr_decide(const NodeSnapshot& self, std::span<const NodeSnapshot> neighbors);

/// Randomized strategy: Direct with probability p_h, else the standard rule.
template <class URBG>
RoutingDecision randomized_decide(const NodeSnapshot& self, std::span<const NodeSnapshot> neighbors,
                                  const DirectProbabilities& probs, URBG& rng) {
  std::bernoulli_distribution go_direct(probs.at(self.height));
  if (go_direct(rng)) return RoutingDecision::direct();
  return standard_gbr_decide(self, neighbors);
}

/// Forward and Sink cost 1; Direct costs height^exponent. Direct at height 0
/// is rejected with InvalidArgument.
double transmission_cost(RoutingDecision decision, int height, double exponent = 2.0);

}  // namespace gbr
