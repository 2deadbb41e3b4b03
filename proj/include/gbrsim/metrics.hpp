#pragma once

#include <cstddef>
#include <vector>

#include "gbrsim/engine.hpp"
#include "gbrsim/topology.hpp"

namespace gbr {

/// Mean energy per sensor for each height (index h-1). Slices with no sensors
/// have count 0 and mean 0.
struct SliceEnergyProfile {
  std::vector<std::size_t> counts;
  std::vector<double> mean_energy;

  int max_height() const noexcept { return static_cast<int>(counts.size()); }
  double mean_at(int height) const { return mean_energy.at(static_cast<std::size_t>(height - 1)); }
};

/// Same idea binned by Euclidean distance to the nearest base station.
struct DistanceEnergyProfile {
  double bin_width = 1.0;
  std::vector<std::size_t> counts;
  std::vector<double> mean_energy;
};

struct EnergyMapRow {
  double x = 0.0;
  double y = 0.0;
  double energy = 0.0;
};

/// Throws InvalidArgument on an empty report.
double max_energy(const EnergyReport& report);

SliceEnergyProfile slice_energy_profile(const EnergyReport& report, const std::vector<int>& heights);
DistanceEnergyProfile distance_energy_profile(const EnergyReport& report, const Topology& topology,
                                              double bin_width = 1.0);

/// One row per sensor, for scatter plots with marker area proportional to energy.
std::vector<EnergyMapRow> energy_map(const EnergyReport& report, const Deployment& deployment);

/// max_energy(a) / max_energy(b). Throws std::domain_error if b spent nothing.
double lifespan_ratio(const EnergyReport& a, const EnergyReport& b);

}  // namespace gbr
