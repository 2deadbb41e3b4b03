#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gbrsim/protocols.hpp"
#include "gbrsim/topology.hpp"

namespace gbr {

/// Per-slice statistics behind the randomized baseline. Index h-1 is slice h.
struct SliceProfile {
  std::vector<std::size_t> populations;
  std::vector<double> generation_rates;  // messages per round entering each slice

  int max_height() const noexcept { return static_cast<int>(populations.size()); }
};

/// Per-round flow through each slice for a given set of direct probabilities.
struct SliceFlow {
  std::vector<double> through;
  std::vector<double> direct_fraction;
  std::vector<double> slice_energy;  // per sensor per round; 0 for empty slices

  double max_slice_energy() const noexcept;
  /// Rate reaching the sinks: one-hop out of slice 1 plus every direct share.
  double delivered_rate() const noexcept;
};

/// Populations by height over reachable nodes; rates n_h / sum(n).
/// Throws InvalidArgument when no node is reachable.
SliceProfile slice_profile_from_topology(const Topology& topology);

/// Top-down flow recurrence:
///   through[H] = rate[H]
///   through[h] = rate[h] + (1 - p[h+1]) * through[h+1]
///   energy[h]  = through[h] * (p[h] * h^k + (1 - p[h])) / n[h]
SliceFlow evaluate_slice_energies(const SliceProfile& profile, const DirectProbabilities& probs,
                                  double direct_cost_exponent = 2.0);

/// Greedy feasibility pass for a target per-sensor energy level. Walking down
/// from the outermost slice, each slice sends as much direct as its budget
/// allows (raising p only raises local energy, and only lowers the load on
/// inner slices). Returns the probabilities when every slice fits the target.
std::optional<DirectProbabilities> feasible_probabilities(const SliceProfile& profile, double target,
                                                          double direct_cost_exponent = 2.0);

struct BalancedSolution {
  DirectProbabilities probabilities;
  double objective = 0.0;  // max slice energy under `probabilities`
  int iterations = 0;
};

/// Minimises the maximum slice energy over p in [0,1]^H by bisection on the
/// target level. `tolerance` is relative to the objective. Throws
/// ConvergenceError if the bracket does not close within `max_iterations`.
BalancedSolution solve_balanced(const SliceProfile& profile, double tolerance,
                                double direct_cost_exponent = 2.0, int max_iterations = 200);

DirectProbabilities solve_balanced_probabilities(const SliceProfile& profile, double tolerance,
                                                 double direct_cost_exponent = 2.0);

}  // namespace gbr
