#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gbrsim/engine.hpp"
#include "gbrsim/optimizer.hpp"
#include "gbrsim/topology.hpp"

namespace gbr {

enum class StrategySelector : std::uint8_t { Standard, Mixed, Randomized };

std::string_view to_string(StrategySelector s) noexcept;
StrategySelector strategy_selector_from_string(std::string_view s);

/// Everything needed to reproduce one experiment. Defaults are the `paper`
/// preset: R = 20, 3 sensors per unit area, stations at (+-10, 0), 5e6 rounds.
struct ExperimentConfig {
  double radius = 20.0;
  double density = 3.0;
  std::optional<std::size_t> n_sensors;
  std::vector<Point> bs_positions{{-10.0, 0.0}, {10.0, 0.0}};
  double comm_radius = 1.0;
  std::uint64_t n_rounds = 5'000'000;
  std::optional<std::uint64_t> topology_seed = 1;
  std::optional<std::uint64_t> trace_seed = 2;
  std::optional<std::uint64_t> decision_seed = 3;
  std::vector<StrategySelector> strategies{StrategySelector::Standard, StrategySelector::Mixed,
                                           StrategySelector::Randomized};
  double epsilon_scale = 1.0;
  double direct_cost_exponent = 2.0;
  PotentialVariant potential_variant = PotentialVariant::CumulativeSquares;
  double optimizer_tolerance = 1e-9;
  std::uint64_t conservation_check_interval = 1000;
  bool log_transmissions = false;
  bool parallel = true;
  std::filesystem::path output_dir = "out";

  /// n_sensors if given, else floor(density * pi * R^2).
  std::size_t resolved_sensor_count() const;
  ProtocolParams protocol_params() const;
};

/// Built-in presets: "paper" and "ci" (R = 8, 1e5 rounds).
ExperimentConfig preset_config(std::string_view name);
std::vector<std::string> preset_names();

nlohmann::json config_to_json(const ExperimentConfig& config);
/// Keys absent from `doc` keep the values already in `base`; unknown keys throw.
ExperimentConfig config_from_json(const nlohmann::json& doc, ExperimentConfig base = {});

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;

  bool ok() const noexcept { return violations.empty(); }
};

ValidationReport validate_config(const ExperimentConfig& config);

struct ExperimentResult {
  ExperimentConfig config;  // resolved: geometry reflects the topology actually used
  Topology topology;
  std::optional<BalancedSolution> optimum;
  std::optional<SliceFlow> ideal_flow;
  std::vector<std::string> labels;  // unique per strategy, input order
  std::vector<EnergyReport> reports;
  std::vector<std::filesystem::path> files;
};

/// Deploys (or takes `preloaded`), optimizes if Randomized is selected, runs
/// every strategy on one shared trace and writes all outputs into
/// config.output_dir. Throws InvalidArgument on an invalid config.
ExperimentResult run_experiment(const ExperimentConfig& config, const Topology* preloaded = nullptr);

/// Builds the same result without touching the filesystem.
ExperimentResult simulate_experiment(const ExperimentConfig& config, const Topology* preloaded = nullptr);

/// Writes topology.json, probabilities.json, summary.json and the CSVs.
std::vector<std::filesystem::path> write_experiment_outputs(const ExperimentResult& result);

nlohmann::json summary_json(const ExperimentResult& result);
/// Max energies per strategy and their pairwise ratios, as printed by the CLI.
std::string summary_table(const ExperimentResult& result);

}  // namespace gbr
