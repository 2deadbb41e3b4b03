#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gbrsim/protocols.hpp"
#include "gbrsim/topology.hpp"

namespace gbr {

class StrategyKind {
 public:
  enum class Type : std::uint8_t { StandardGBR, MixedGBR, Randomized };

  static StrategyKind standard() { return StrategyKind(Type::StandardGBR, {}); }
  static StrategyKind mixed() { return StrategyKind(Type::MixedGBR, {}); }
  static StrategyKind randomized(DirectProbabilities probs) { return StrategyKind(Type::Randomized, std::move(probs)); }

  Type type() const noexcept { return type_; }
  /// Only meaningful for Randomized.
  const DirectProbabilities& probabilities() const noexcept { return probs_; }
  /// "standard", "mixed" or "randomized".
  std::string label() const;

 private:
  StrategyKind(Type t, DirectProbabilities p) : type_(t), probs_(std::move(p)) {}

  Type type_;
  DirectProbabilities probs_;
};

/// One event per round, at a node drawn uniformly from the reachable set.
/// Random access: the node for round r depends only on (seed, r).
class EventTrace {
 public:
  EventTrace(std::vector<NodeId> candidates, std::uint64_t seed, std::uint64_t n_rounds);
  /// Trace over every reachable node of `topology`.
  EventTrace(const Topology& topology, std::uint64_t seed, std::uint64_t n_rounds);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t n_rounds() const noexcept { return n_rounds_; }
  const std::vector<NodeId>& candidates() const noexcept { return candidates_; }

  NodeId event_at(std::uint64_t round) const;

 private:
  std::vector<NodeId> candidates_;
  std::uint64_t seed_;
  std::uint64_t n_rounds_;
};

NodeId generate_event(const EventTrace& trace, std::uint64_t round);

struct SimulationState {
  std::vector<double> energy_spent;
  std::vector<std::uint32_t> queue;
  std::uint64_t round = 0;
  std::uint64_t delivered = 0;
  std::uint64_t generated = 0;

  static SimulationState initial(std::size_t n_nodes);
  std::uint64_t total_queued() const noexcept;
  bool conserves_messages() const noexcept { return generated == delivered + total_queued(); }
};

struct SimulationOptions {
  ProtocolParams protocol;
  /// Seeds the randomized strategy's decisions; kept apart from the event trace.
  std::uint64_t decision_seed = 0;
  /// Rounds between full message-conservation checks in run_simulation (0 = never).
  std::uint64_t conservation_check_interval = 1000;
};

struct Transmission {
  std::uint64_t round = 0;
  NodeId sender = 0;
  RoutingDecision decision;
  std::int64_t station = -1;  // delivering base station for Sink, -1 otherwise
  double cost = 0.0;
};

using TransmissionObserver = std::function<void(const Transmission&)>;

struct EnergyReport {
  std::string strategy;
  std::uint64_t trace_seed = 0;
  std::uint64_t rounds = 0;
  std::vector<double> energy_spent;
  std::vector<std::uint32_t> queue_residue;
  std::uint64_t delivered = 0;
  std::uint64_t generated = 0;
  std::uint64_t direct_transmissions = 0;
};

/// Incremental simulator. Each step() takes a round-start snapshot, lets every
/// node with a queued message send one, then injects the round's event; all
/// arrivals become sendable the next round.
class Simulation {
 public:
  Simulation(const Topology& topology, StrategyKind strategy, SimulationOptions options = {});
  Simulation(const Topology& topology, StrategyKind strategy, SimulationOptions options, SimulationState state);

  void step(NodeId event_node);

  const SimulationState& state() const noexcept { return state_; }
  const StrategyKind& strategy() const noexcept { return strategy_; }
  std::uint64_t direct_transmissions() const noexcept { return direct_count_; }

  void set_observer(TransmissionObserver observer) { observer_ = std::move(observer); }

  /// Throws ConservationError if generated != delivered + queued.
  void check_conservation() const;

 private:
  RoutingDecision decide(NodeId sender);

  const Topology* topology_;
  StrategyKind strategy_;
  SimulationOptions options_;
  SimulationState state_;
  TransmissionObserver observer_;
  std::uint64_t direct_count_ = 0;

  std::vector<NodeId> active_;   // nodes with queue > 0 (unordered)
  std::vector<char> is_active_;
  std::vector<NodeSnapshot> scratch_;
  std::vector<std::pair<NodeId, RoutingDecision>> pending_;
};

/// Pure single-round transition on a copy of `state`.
SimulationState step_round(const SimulationState& state, const Topology& topology, const StrategyKind& strategy,
                           NodeId event_node, const SimulationOptions& options = {});

EnergyReport run_simulation(const Topology& topology, const StrategyKind& strategy, const EventTrace& trace,
                            const SimulationOptions& options = {}, const TransmissionObserver& observer = {});

/// Runs every strategy from a fresh state against the same trace; reports in
/// input order. Strategies run concurrently when `parallel` is set.
std::vector<EnergyReport> run_comparison(const Topology& topology, const std::vector<StrategyKind>& strategies,
                                         const EventTrace& trace, const SimulationOptions& options = {},
                                         bool parallel = true);

}  // namespace gbr
