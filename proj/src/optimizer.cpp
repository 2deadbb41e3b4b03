#include "gbrsim/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gbrsim/errors.hpp"

namespace gbr {

namespace {

double direct_cost(int height, double exponent) {
  if (exponent == 2.0) return static_cast<double>(height) * height;
  return std::pow(static_cast<double>(height), exponent);
}

void check_profile(const SliceProfile& profile) {
  if (profile.populations.empty()) throw InvalidArgument("slice profile has no slices");
  if (profile.generation_rates.size() != profile.populations.size()) {
    throw InvalidArgument("slice profile populations and rates differ in length");
  }
  for (double r : profile.generation_rates) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidArgument("generation rates must be finite and >= 0");
  }
}

}  // namespace

double SliceFlow::max_slice_energy() const noexcept {
  return slice_energy.empty() ? 0.0 : *std::max_element(slice_energy.begin(), slice_energy.end());
}

double SliceFlow::delivered_rate() const noexcept {
  if (through.empty()) return 0.0;
  double out = (1.0 - direct_fraction[0]) * through[0];
  for (std::size_t i = 0; i < through.size(); ++i) out += direct_fraction[i] * through[i];
  return out;
}

SliceProfile slice_profile_from_topology(const Topology& topology) {
  const auto& reachable = topology.reachable_nodes();
  if (reachable.empty()) throw InvalidArgument("topology has no node connected to a base station");
  SliceProfile profile;
  profile.populations.assign(static_cast<std::size_t>(topology.max_height()), 0);
  for (NodeId n : reachable) ++profile.populations[static_cast<std::size_t>(topology.height(n) - 1)];
  const auto total = static_cast<double>(reachable.size());
  profile.generation_rates.reserve(profile.populations.size());
  for (auto count : profile.populations) profile.generation_rates.push_back(static_cast<double>(count) / total);
  return profile;
}

SliceFlow evaluate_slice_energies(const SliceProfile& profile, const DirectProbabilities& probs,
                                  double direct_cost_exponent) {
  check_profile(profile);
  const int top = profile.max_height();
  if (probs.max_height() < top) throw InvalidArgument("direct probabilities do not cover every slice");

  SliceFlow flow;
  const auto slices = static_cast<std::size_t>(top);
  flow.through.assign(slices, 0.0);
  flow.direct_fraction.assign(slices, 0.0);
  flow.slice_energy.assign(slices, 0.0);

  double incoming = 0.0;
  for (int h = top; h >= 1; --h) {
    const auto i = static_cast<std::size_t>(h - 1);
    const double p = probs.at(h);
    const double through = profile.generation_rates[i] + incoming;
    flow.through[i] = through;
    flow.direct_fraction[i] = p;
    if (profile.populations[i] > 0) {
      const double per_message = p * direct_cost(h, direct_cost_exponent) + (1.0 - p);
      flow.slice_energy[i] = through * per_message / static_cast<double>(profile.populations[i]);
    }
    incoming = (1.0 - p) * through;
  }
  return flow;
}

std::optional<DirectProbabilities> feasible_probabilities(const SliceProfile& profile, double target,
                                                          double direct_cost_exponent) {
  check_profile(profile);
  const int top = profile.max_height();
  std::vector<double> p(static_cast<std::size_t>(top), 0.0);
  double incoming = 0.0;
  for (int h = top; h >= 1; --h) {
    const auto i = static_cast<std::size_t>(h - 1);
    const double through = profile.generation_rates[i] + incoming;
    const auto n = static_cast<double>(profile.populations[i]);
    double direct = 0.0;
    if (profile.populations[i] > 0 && through > 0.0) {
      // Pure forwarding is the cheapest this slice can do.
      if (through / n > target) return std::nullopt;
      const double extra = direct_cost(h, direct_cost_exponent) - 1.0;
      if (extra > 0.0) direct = std::clamp((target * n / through - 1.0) / extra, 0.0, 1.0);
    }
    p[i] = direct;
    incoming = (1.0 - direct) * through;
  }
  return DirectProbabilities(std::move(p));
}

BalancedSolution solve_balanced(const SliceProfile& profile, double tolerance, double direct_cost_exponent,
                                int max_iterations) {
  check_profile(profile);
  if (!(tolerance > 0.0)) throw InvalidArgument("optimizer tolerance must be positive");

  const DirectProbabilities all_forward(std::vector<double>(profile.populations.size(), 0.0));
  double hi = evaluate_slice_energies(profile, all_forward, direct_cost_exponent).max_slice_energy();
  auto best = feasible_probabilities(profile, hi, direct_cost_exponent);
  if (!best) throw std::logic_error("all-forward energy level must be feasible");
  if (hi <= 0.0) return {*best, 0.0, 0};

  double lo = 0.0;
  int iterations = 0;
  while (hi - lo > tolerance * hi) {
    if (++iterations > max_iterations) {
      throw ConvergenceError("slice optimizer did not converge within " + std::to_string(max_iterations) +
                             " bisection steps");
    }
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) {
      throw ConvergenceError("slice optimizer bracket cannot shrink below the requested tolerance");
    }
    if (auto candidate = feasible_probabilities(profile, mid, direct_cost_exponent)) {
      hi = mid;
      best = std::move(candidate);
    } else {
      lo = mid;
    }
  }

  const double objective = evaluate_slice_energies(profile, *best, direct_cost_exponent).max_slice_energy();
  if (objective > hi * (1.0 + 1e-9)) {
    throw std::logic_error("feasible probabilities exceed their target energy level");
  }
  return {std::move(*best), objective, iterations};
}

DirectProbabilities solve_balanced_probabilities(const SliceProfile& profile, double tolerance,
                                                 double direct_cost_exponent) {
  return solve_balanced(profile, tolerance, direct_cost_exponent).probabilities;
}

}  // namespace gbr
