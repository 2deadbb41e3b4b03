#include "gbrsim/engine.hpp"

#include <algorithm>
#include <future>
#include <numeric>
#include <random>
#include <string>

#include "gbrsim/errors.hpp"
#include "gbrsim/rng.hpp"

namespace gbr {

std::string StrategyKind::label() const {
  switch (type_) {
    case Type::StandardGBR:
      return "standard";
    case Type::MixedGBR:
      return "mixed";
    case Type::Randomized:
      return "randomized";
  }
  return "unknown";
}

EventTrace::EventTrace(std::vector<NodeId> candidates, std::uint64_t seed, std::uint64_t n_rounds)
    : candidates_(std::move(candidates)), seed_(seed), n_rounds_(n_rounds) {
  if (candidates_.empty() && n_rounds_ > 0) {
    throw InvalidArgument("event trace needs at least one reachable node");
  }
}

EventTrace::EventTrace(const Topology& topology, std::uint64_t seed, std::uint64_t n_rounds)
    : EventTrace(topology.reachable_nodes(), seed, n_rounds) {}

NodeId EventTrace::event_at(std::uint64_t round) const {
  if (round >= n_rounds_) throw InvalidArgument("round " + std::to_string(round) + " is past the end of the trace");
  SplitMix64 rng(derive_seed({seed_, round}));
  std::uniform_int_distribution<std::size_t> pick(0, candidates_.size() - 1);
  return candidates_[pick(rng)];
}

NodeId generate_event(const EventTrace& trace, std::uint64_t round) { return trace.event_at(round); }

SimulationState SimulationState::initial(std::size_t n_nodes) {
  SimulationState s;
  s.energy_spent.assign(n_nodes, 0.0);
  s.queue.assign(n_nodes, 0);
  return s;
}

std::uint64_t SimulationState::total_queued() const noexcept {
  return std::accumulate(queue.begin(), queue.end(), std::uint64_t{0});
}

Simulation::Simulation(const Topology& topology, StrategyKind strategy, SimulationOptions options)
    : Simulation(topology, std::move(strategy), options, SimulationState::initial(topology.size())) {}

Simulation::Simulation(const Topology& topology, StrategyKind strategy, SimulationOptions options,
                       SimulationState state)
    : topology_(&topology), strategy_(std::move(strategy)), options_(options), state_(std::move(state)) {
  const std::size_t n = topology.size();
  if (state_.energy_spent.size() != n || state_.queue.size() != n) {
    throw InvalidArgument("simulation state does not match the topology size");
  }
  if (strategy_.type() == StrategyKind::Type::Randomized &&
      strategy_.probabilities().max_height() < topology.max_height()) {
    throw InvalidArgument("randomized strategy probabilities do not cover every height");
  }
  is_active_.assign(n, 0);
  for (NodeId i = 0; i < n; ++i) {
    if (state_.queue[i] > 0) {
      if (!topology.reachable(i)) throw InvalidArgument("queued messages at an unreachable node");
      active_.push_back(i);
      is_active_[i] = 1;
    }
  }
}

RoutingDecision Simulation::decide(NodeId sender) {
  const auto& t = *topology_;
  const NodeSnapshot self{sender, t.height(sender), state_.energy_spent[sender], state_.queue[sender]};
  scratch_.clear();
  for (NodeId nb : t.neighbors(sender)) {
    scratch_.push_back({nb, t.height(nb), state_.energy_spent[nb], state_.queue[nb]});
  }
  switch (strategy_.type()) {
    case StrategyKind::Type::StandardGBR:
      return standard_gbr_decide(self, scratch_);
    case StrategyKind::Type::MixedGBR:
      return mixed_gbr_decide(self, scratch_, options_.protocol);
    case StrategyKind::Type::Randomized: {
      SplitMix64 rng(derive_seed({options_.decision_seed, state_.round, sender}));
      return randomized_decide(self, scratch_, strategy_.probabilities(), rng);
    }
  }
  throw std::logic_error("unhandled strategy");
}

void Simulation::step(NodeId event_node) {
  const auto& t = *topology_;
  if (event_node >= t.size() || !t.reachable(event_node)) {
    throw InvalidArgument("event node " + std::to_string(event_node) + " is not a reachable sensor");
  }

  if (observer_) std::sort(active_.begin(), active_.end());

  // Every decision reads the round-start state; nothing is applied until all are made.
  pending_.clear();
  for (NodeId sender : active_) pending_.emplace_back(sender, decide(sender));

  for (const auto& [sender, decision] : pending_) {
    const double cost = transmission_cost(decision, t.height(sender), options_.protocol.direct_cost_exponent);
    state_.energy_spent[sender] += cost;
    --state_.queue[sender];
    if (decision.kind == RoutingDecision::Kind::Forward) {
      const NodeId to = decision.target;
      ++state_.queue[to];
      if (!is_active_[to]) {
        is_active_[to] = 1;
        active_.push_back(to);
      }
    } else {
      ++state_.delivered;
      if (decision.kind == RoutingDecision::Kind::Direct) ++direct_count_;
    }
    if (observer_) {
      std::int64_t station = -1;
      if (decision.kind == RoutingDecision::Kind::Sink) station = *t.delivery_station(sender);
      observer_({state_.round, sender, decision, station, cost});
    }
  }

  ++state_.queue[event_node];
  ++state_.generated;
  if (!is_active_[event_node]) {
    is_active_[event_node] = 1;
    active_.push_back(event_node);
  }

  std::erase_if(active_, [this](NodeId n) {
    if (state_.queue[n] > 0) return false;
    is_active_[n] = 0;
    return true;
  });
  ++state_.round;
}

void Simulation::check_conservation() const {
  if (!state_.conserves_messages()) {
    throw ConservationError("message conservation violated after round " + std::to_string(state_.round) +
                            ": generated " + std::to_string(state_.generated) + ", delivered " +
                            std::to_string(state_.delivered) + ", queued " + std::to_string(state_.total_queued()));
  }
}

SimulationState step_round(const SimulationState& state, const Topology& topology, const StrategyKind& strategy,
                           NodeId event_node, const SimulationOptions& options) {
  Simulation sim(topology, strategy, options, state);
  sim.step(event_node);
  return sim.state();
}

EnergyReport run_simulation(const Topology& topology, const StrategyKind& strategy, const EventTrace& trace,
                            const SimulationOptions& options, const TransmissionObserver& observer) {
  if (topology.reachable_nodes().empty()) throw InvalidArgument("topology has no reachable node");
  Simulation sim(topology, strategy, options);
  if (observer) sim.set_observer(observer);
  const auto interval = options.conservation_check_interval;
  for (std::uint64_t r = 0; r < trace.n_rounds(); ++r) {
    sim.step(trace.event_at(r));
    if (interval > 0 && (r + 1) % interval == 0) sim.check_conservation();
  }
  sim.check_conservation();

  const auto& s = sim.state();
  EnergyReport report;
  report.strategy = strategy.label();
  report.trace_seed = trace.seed();
  report.rounds = s.round;
  report.energy_spent = s.energy_spent;
  report.queue_residue = s.queue;
  report.delivered = s.delivered;
  report.generated = s.generated;
  report.direct_transmissions = sim.direct_transmissions();
  return report;
}

std::vector<EnergyReport> run_comparison(const Topology& topology, const std::vector<StrategyKind>& strategies,
                                         const EventTrace& trace, const SimulationOptions& options, bool parallel) {
  if (strategies.empty()) throw InvalidArgument("comparison needs at least one strategy");
  std::vector<EnergyReport> reports;
  reports.reserve(strategies.size());
  if (!parallel || strategies.size() == 1) {
    for (const auto& s : strategies) reports.push_back(run_simulation(topology, s, trace, options));
    return reports;
  }
  std::vector<std::future<EnergyReport>> jobs;
  jobs.reserve(strategies.size());
  for (const auto& s : strategies) {
    jobs.push_back(std::async(std::launch::async, [&topology, &trace, &options, &s] {
      return run_simulation(topology, s, trace, options);
    }));
  }
  for (auto& j : jobs) reports.push_back(j.get());
  return reports;
}

}  // namespace gbr
