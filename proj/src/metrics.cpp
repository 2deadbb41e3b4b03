#include "gbrsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gbrsim/errors.hpp"

namespace gbr {

double max_energy(const EnergyReport& report) {
  if (report.energy_spent.empty()) throw InvalidArgument("energy report has no nodes");
  return *std::max_element(report.energy_spent.begin(), report.energy_spent.end());
}

SliceEnergyProfile slice_energy_profile(const EnergyReport& report, const std::vector<int>& heights) {
  if (heights.size() != report.energy_spent.size()) {
    throw InvalidArgument("heights and energy report differ in length");
  }
  const int top = heights.empty() ? 0 : *std::max_element(heights.begin(), heights.end());
  SliceEnergyProfile profile;
  profile.counts.assign(static_cast<std::size_t>(std::max(top, 0)), 0);
  std::vector<double> sums(profile.counts.size(), 0.0);
  for (std::size_t i = 0; i < heights.size(); ++i) {
    if (heights[i] < 1) continue;
    const auto slot = static_cast<std::size_t>(heights[i] - 1);
    ++profile.counts[slot];
    sums[slot] += report.energy_spent[i];
  }
  profile.mean_energy.resize(sums.size());
  for (std::size_t s = 0; s < sums.size(); ++s) {
    profile.mean_energy[s] = profile.counts[s] ? sums[s] / static_cast<double>(profile.counts[s]) : 0.0;
  }
  return profile;
}

DistanceEnergyProfile distance_energy_profile(const EnergyReport& report, const Topology& topology,
                                              double bin_width) {
  if (!(bin_width > 0.0)) throw InvalidArgument("bin width must be positive");
  if (topology.size() != report.energy_spent.size()) {
    throw InvalidArgument("topology and energy report differ in length");
  }
  const auto& d = topology.deployment();
  DistanceEnergyProfile profile;
  profile.bin_width = bin_width;
  std::vector<double> sums;
  for (NodeId n : topology.reachable_nodes()) {
    double nearest = INFINITY;
    for (const auto& bs : d.base_stations) nearest = std::min(nearest, std::sqrt(squared_distance(d.sensors[n], bs)));
    const auto bin = static_cast<std::size_t>(nearest / bin_width);
    if (bin >= profile.counts.size()) {
      profile.counts.resize(bin + 1, 0);
      sums.resize(bin + 1, 0.0);
    }
    ++profile.counts[bin];
    sums[bin] += report.energy_spent[n];
  }
  profile.mean_energy.resize(sums.size());
  for (std::size_t b = 0; b < sums.size(); ++b) {
    profile.mean_energy[b] = profile.counts[b] ? sums[b] / static_cast<double>(profile.counts[b]) : 0.0;
  }
  return profile;
}

std::vector<EnergyMapRow> energy_map(const EnergyReport& report, const Deployment& deployment) {
  if (report.energy_spent.size() != deployment.sensors.size()) {
    throw InvalidArgument("energy report and deployment differ in length");
  }
  std::vector<EnergyMapRow> rows;
  rows.reserve(deployment.sensors.size());
  for (std::size_t i = 0; i < deployment.sensors.size(); ++i) {
    rows.push_back({deployment.sensors[i].x, deployment.sensors[i].y, report.energy_spent[i]});
  }
  return rows;
}

double lifespan_ratio(const EnergyReport& a, const EnergyReport& b) {
  const double denom = max_energy(b);
  if (denom == 0.0) throw std::domain_error("lifespan ratio undefined: reference report spent no energy");
  return max_energy(a) / denom;
}

}  // namespace gbr
