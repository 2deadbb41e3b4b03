#include "gbrsim/experiment.hpp"

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "gbrsim/errors.hpp"
#include "gbrsim/metrics.hpp"
#include "gbrsim/output.hpp"

namespace gbr {

std::string_view to_string(StrategySelector s) noexcept {
  switch (s) {
    case StrategySelector::Standard:
      return "standard";
    case StrategySelector::Mixed:
      return "mixed";
    case StrategySelector::Randomized:
      return "randomized";
  }
  return "?";
}

StrategySelector strategy_selector_from_string(std::string_view s) {
  if (s == "standard") return StrategySelector::Standard;
  if (s == "mixed") return StrategySelector::Mixed;
  if (s == "randomized") return StrategySelector::Randomized;
  throw InvalidArgument("unknown strategy '" + std::string(s) + "' (expected standard, mixed or randomized)");
}

std::size_t ExperimentConfig::resolved_sensor_count() const {
  if (n_sensors) return *n_sensors;
  const double n = std::floor(density * std::numbers::pi * radius * radius);
  return n > 0.0 ? static_cast<std::size_t>(n) : 0;
}

ProtocolParams ExperimentConfig::protocol_params() const {
  return {epsilon_scale, direct_cost_exponent, potential_variant};
}

ExperimentConfig preset_config(std::string_view name) {
  ExperimentConfig c;
  if (name == "paper") return c;
  if (name == "ci") {
    c.radius = 8.0;
    c.bs_positions = {{-4.0, 0.0}, {4.0, 0.0}};
    c.n_rounds = 100'000;
    return c;
  }
  throw InvalidArgument("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() { return {"paper", "ci"}; }

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["radius"] = c.radius;
  j["density"] = c.density;
  j["n_sensors"] = c.n_sensors ? nlohmann::json(*c.n_sensors) : nlohmann::json(nullptr);
  j["resolved_sensors"] = c.resolved_sensor_count();
  auto bs = nlohmann::json::array();
  for (const auto& p : c.bs_positions) bs.push_back({p.x, p.y});
  j["base_stations"] = bs;
  j["comm_radius"] = c.comm_radius;
  j["rounds"] = c.n_rounds;
  auto seed = [](const std::optional<std::uint64_t>& s) { return s ? nlohmann::json(*s) : nlohmann::json(nullptr); };
  j["seeds"] = {{"topology", seed(c.topology_seed)}, {"trace", seed(c.trace_seed)}, {"decision", seed(c.decision_seed)}};
  auto strategies = nlohmann::json::array();
  for (auto s : c.strategies) strategies.push_back(std::string(to_string(s)));
  j["strategies"] = strategies;
  j["epsilon_scale"] = c.epsilon_scale;
  j["direct_cost_exponent"] = c.direct_cost_exponent;
  j["potential_variant"] = std::string(to_string(c.potential_variant));
  j["optimizer_tolerance"] = c.optimizer_tolerance;
  j["conservation_check_interval"] = c.conservation_check_interval;
  j["log_transmissions"] = c.log_transmissions;
  j["output_dir"] = c.output_dir.generic_string();
  return j;
}

namespace {

std::optional<std::uint64_t> seed_from(const nlohmann::json& v) {
  if (v.is_null()) return std::nullopt;
  return v.get<std::uint64_t>();
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& doc, ExperimentConfig c) {
  if (!doc.is_object()) throw InvalidArgument("experiment config must be a JSON object");
  static const std::set<std::string> known{
      "preset", "radius", "density", "n_sensors", "resolved_sensors", "base_stations", "comm_radius", "rounds",
      "seeds", "strategies", "epsilon_scale", "direct_cost_exponent", "potential_variant", "optimizer_tolerance",
      "conservation_check_interval", "log_transmissions", "parallel", "output_dir"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.contains(key)) throw InvalidArgument("unknown config key '" + key + "'");
  }
  try {
    if (doc.contains("preset")) c = preset_config(doc["preset"].get<std::string>());
    if (doc.contains("radius")) c.radius = doc["radius"].get<double>();
    if (doc.contains("density")) c.density = doc["density"].get<double>();
    if (doc.contains("n_sensors")) {
      const auto& v = doc["n_sensors"];
      if (v.is_null()) {
        c.n_sensors.reset();
      } else {
        if (!v.is_number_unsigned()) throw InvalidArgument("n_sensors must be a non-negative integer");
        c.n_sensors = v.get<std::size_t>();
      }
    }
    if (doc.contains("base_stations")) {
      c.bs_positions.clear();
      for (const auto& p : doc["base_stations"]) {
        if (!p.is_array() || p.size() != 2) throw InvalidArgument("base_stations entries must be [x, y]");
        c.bs_positions.push_back({p[0].get<double>(), p[1].get<double>()});
      }
    }
    if (doc.contains("comm_radius")) c.comm_radius = doc["comm_radius"].get<double>();
    if (doc.contains("rounds")) c.n_rounds = doc["rounds"].get<std::uint64_t>();
    if (doc.contains("seeds")) {
      const auto& s = doc["seeds"];
      if (!s.is_object()) throw InvalidArgument("seeds must be an object");
      if (s.contains("topology")) c.topology_seed = seed_from(s["topology"]);
      if (s.contains("trace")) c.trace_seed = seed_from(s["trace"]);
      if (s.contains("decision")) c.decision_seed = seed_from(s["decision"]);
    }
    if (doc.contains("strategies")) {
      c.strategies.clear();
      for (const auto& s : doc["strategies"]) c.strategies.push_back(strategy_selector_from_string(s.get<std::string>()));
    }
    if (doc.contains("epsilon_scale")) c.epsilon_scale = doc["epsilon_scale"].get<double>();
    if (doc.contains("direct_cost_exponent")) c.direct_cost_exponent = doc["direct_cost_exponent"].get<double>();
    if (doc.contains("potential_variant")) {
      c.potential_variant = potential_variant_from_string(doc["potential_variant"].get<std::string>());
    }
    if (doc.contains("optimizer_tolerance")) c.optimizer_tolerance = doc["optimizer_tolerance"].get<double>();
    if (doc.contains("conservation_check_interval")) {
      c.conservation_check_interval = doc["conservation_check_interval"].get<std::uint64_t>();
    }
    if (doc.contains("log_transmissions")) c.log_transmissions = doc["log_transmissions"].get<bool>();
    if (doc.contains("parallel")) c.parallel = doc["parallel"].get<bool>();
    if (doc.contains("output_dir")) c.output_dir = doc["output_dir"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed experiment config: ") + e.what());
  }
  return c;
}

ValidationReport validate_config(const ExperimentConfig& c) {
  ValidationReport v;
  auto positive = [&v](double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) v.violations.push_back(std::string(what) + " must be positive and finite");
  };
  positive(c.radius, "radius");
  if (!c.n_sensors) positive(c.density, "density");
  positive(c.comm_radius, "comm_radius");
  positive(c.optimizer_tolerance, "optimizer_tolerance");
  positive(c.direct_cost_exponent, "direct_cost_exponent");
  if (!(c.epsilon_scale >= 0.0) || !std::isfinite(c.epsilon_scale)) {
    v.violations.push_back("epsilon_scale must be finite and non-negative");
  }
  if (c.bs_positions.empty()) v.violations.push_back("at least one base station is required");
  for (std::size_t i = 0; i < c.bs_positions.size(); ++i) {
    const auto p = c.bs_positions[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      v.violations.push_back("base station " + std::to_string(i) + " has non-finite coordinates");
    } else if (std::isfinite(c.radius) && squared_distance(p, {}) > c.radius * c.radius) {
      v.warnings.push_back("base station " + std::to_string(i) + " lies outside the deployment disc");
    }
  }
  if (c.strategies.empty()) v.violations.push_back("strategy list is empty");
  if (!c.topology_seed) v.violations.push_back("topology seed is missing");
  if (!c.trace_seed) v.violations.push_back("trace seed is missing");
  if (!c.decision_seed) v.violations.push_back("decision seed is missing");
  if (c.output_dir.empty()) v.violations.push_back("output_dir is empty");
  return v;
}

namespace {

std::vector<std::string> unique_labels(const std::vector<StrategySelector>& strategies) {
  std::vector<std::string> labels;
  std::map<std::string, int> seen;
  for (auto s : strategies) {
    std::string base(to_string(s));
    const int n = ++seen[base];
    labels.push_back(n == 1 ? base : base + "_" + std::to_string(n));
  }
  return labels;
}

ExperimentResult prepare(const ExperimentConfig& config, const Topology* preloaded) {
  const auto report = validate_config(config);
  if (!report.ok()) {
    std::string msg = "invalid experiment config:";
    for (const auto& s : report.violations) msg += "\n  - " + s;
    throw InvalidArgument(msg);
  }

  ExperimentResult result;
  result.config = config;
  if (preloaded != nullptr) {
    result.topology = *preloaded;
    const auto& d = preloaded->deployment();
    auto& c = result.config;
    c.radius = d.radius;
    c.bs_positions = d.base_stations;
    c.comm_radius = preloaded->comm_radius();
    c.topology_seed = d.seed;
    if (c.resolved_sensor_count() != d.sensors.size()) c.n_sensors = d.sensors.size();
  } else {
    result.topology = build_topology(deploy_uniform_disc(config.resolved_sensor_count(), config.radius,
                                                         config.bs_positions, *config.topology_seed),
                                     config.comm_radius);
  }
  if (result.topology.reachable_nodes().empty()) {
    throw RoutingFault("no sensor is connected to a base station; nothing to simulate");
  }

  const bool wants_randomized = std::find(config.strategies.begin(), config.strategies.end(),
                                          StrategySelector::Randomized) != config.strategies.end();
  if (wants_randomized) {
    const auto profile = slice_profile_from_topology(result.topology);
    result.optimum = solve_balanced(profile, config.optimizer_tolerance, config.direct_cost_exponent);
    result.ideal_flow = evaluate_slice_energies(profile, result.optimum->probabilities, config.direct_cost_exponent);
  }
  result.labels = unique_labels(config.strategies);
  return result;
}

std::vector<StrategyKind> strategy_kinds(const ExperimentResult& r) {
  std::vector<StrategyKind> kinds;
  for (auto s : r.config.strategies) {
    switch (s) {
      case StrategySelector::Standard:
        kinds.push_back(StrategyKind::standard());
        break;
      case StrategySelector::Mixed:
        kinds.push_back(StrategyKind::mixed());
        break;
      case StrategySelector::Randomized:
        kinds.push_back(StrategyKind::randomized(r.optimum->probabilities));
        break;
    }
  }
  return kinds;
}

SimulationOptions simulation_options(const ExperimentConfig& c) {
  SimulationOptions o;
  o.protocol = c.protocol_params();
  o.decision_seed = *c.decision_seed;
  o.conservation_check_interval = c.conservation_check_interval;
  return o;
}

void simulate(ExperimentResult& r, bool write_logs) {
  const EventTrace trace(r.topology, *r.config.trace_seed, r.config.n_rounds);
  const auto kinds = strategy_kinds(r);
  const auto options = simulation_options(r.config);

  if (!write_logs) {
    for (auto& rep : run_comparison(r.topology, kinds, trace, options, r.config.parallel)) {
      r.reports.push_back(std::move(rep));
    }
  } else {
    std::filesystem::create_directories(r.config.output_dir);
    const auto config_json = config_to_json(r.config);
    for (std::size_t i = 0; i < kinds.size(); ++i) {
      const auto path = r.config.output_dir / ("transmissions_" + r.labels[i] + ".csv");
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot open " + path.string() + " for writing");
      TransmissionLogWriter log(out, config_json);
      r.reports.push_back(run_simulation(r.topology, kinds[i], trace, options, std::ref(log)));
      r.files.push_back(path);
    }
  }
  for (std::size_t i = 0; i < r.reports.size(); ++i) r.reports[i].strategy = r.labels[i];
}

}  // namespace

ExperimentResult simulate_experiment(const ExperimentConfig& config, const Topology* preloaded) {
  auto result = prepare(config, preloaded);
  simulate(result, false);
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const Topology* preloaded) {
  auto result = prepare(config, preloaded);
  simulate(result, config.log_transmissions);
  auto written = write_experiment_outputs(result);
  result.files.insert(result.files.begin(), written.begin(), written.end());
  return result;
}

nlohmann::json summary_json(const ExperimentResult& r) {
  nlohmann::json j;
  j["format"] = "gbrsim-summary";
  j["config"] = config_to_json(r.config);
  j["topology"] = {{"sensors", r.topology.size()},
                   {"reachable", r.topology.reachable_nodes().size()},
                   {"max_height", r.topology.max_height()}};
  auto strategies = nlohmann::json::array();
  for (const auto& rep : r.reports) {
    double total = 0.0;
    for (double e : rep.energy_spent) total += e;
    std::uint64_t queued = 0;
    for (auto q : rep.queue_residue) queued += q;
    strategies.push_back({{"label", rep.strategy},
                          {"max_energy", max_energy(rep)},
                          {"total_energy", total},
                          {"generated", rep.generated},
                          {"delivered", rep.delivered},
                          {"queued", queued},
                          {"direct_transmissions", rep.direct_transmissions}});
  }
  j["strategies"] = strategies;
  auto ratios = nlohmann::json::array();
  for (std::size_t a = 0; a < r.reports.size(); ++a) {
    for (std::size_t b = 0; b < r.reports.size(); ++b) {
      if (a == b) continue;
      const double denom = max_energy(r.reports[b]);
      ratios.push_back({{"numerator", r.reports[a].strategy},
                        {"denominator", r.reports[b].strategy},
                        {"value", denom > 0.0 ? nlohmann::json(max_energy(r.reports[a]) / denom)
                                              : nlohmann::json(nullptr)}});
    }
  }
  j["ratios"] = ratios;
  if (r.optimum) {
    j["optimizer"] = {{"objective_per_round", r.optimum->objective},
                      {"iterations", r.optimum->iterations},
                      {"probabilities", r.optimum->probabilities.values()}};
    j["randomized_ideal_max_energy"] = r.optimum->objective * static_cast<double>(r.config.n_rounds);
  }
  return j;
}

std::vector<std::filesystem::path> write_experiment_outputs(const ExperimentResult& r) {
  const auto& dir = r.config.output_dir;
  std::filesystem::create_directories(dir);
  const auto config_json = config_to_json(r.config);
  std::vector<std::filesystem::path> files;

  auto topo = topology_to_json(r.topology);
  topo["config"] = config_json;
  write_json_file(dir / "topology.json", topo);
  files.push_back(dir / "topology.json");

  if (r.optimum) {
    auto probs = probabilities_to_json(r.optimum->probabilities);
    probs["objective_per_round"] = r.optimum->objective;
    probs["config"] = config_json;
    write_json_file(dir / "probabilities.json", probs);
    files.push_back(dir / "probabilities.json");
  }

  write_json_file(dir / "summary.json", summary_json(r));
  files.push_back(dir / "summary.json");

  std::ostringstream slice;
  write_slice_profile_csv(slice, config_json, r.topology, r.reports, r.labels, r.ideal_flow, r.config.n_rounds);
  write_text_file(dir / "slice_profile.csv", slice.str());
  files.push_back(dir / "slice_profile.csv");

  std::ostringstream distance;
  write_distance_profile_csv(distance, config_json, r.topology, r.reports, r.labels);
  write_text_file(dir / "distance_profile.csv", distance.str());
  files.push_back(dir / "distance_profile.csv");

  std::ostringstream map;
  write_energy_map_csv(map, config_json, r.topology, r.reports, r.labels);
  write_text_file(dir / "energy_map.csv", map.str());
  files.push_back(dir / "energy_map.csv");
  return files;
}

std::string summary_table(const ExperimentResult& r) {
  std::ostringstream out;
  out << "sensors " << r.topology.size() << ", reachable " << r.topology.reachable_nodes().size()
      << ", max height " << r.topology.max_height() << ", rounds " << r.config.n_rounds << "\n\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-14s %16s %12s %12s %12s\n", "strategy", "max_energy", "generated", "delivered",
                "direct");
  out << line;
  for (const auto& rep : r.reports) {
    std::snprintf(line, sizeof line, "%-14s %16.0f %12llu %12llu %12llu\n", rep.strategy.c_str(), max_energy(rep),
                  static_cast<unsigned long long>(rep.generated), static_cast<unsigned long long>(rep.delivered),
                  static_cast<unsigned long long>(rep.direct_transmissions));
    out << line;
  }
  if (r.optimum) {
    std::snprintf(line, sizeof line, "%-14s %16.0f\n", "ideal(slices)",
                  r.optimum->objective * static_cast<double>(r.config.n_rounds));
    out << line;
  }
  if (r.reports.size() > 1) {
    out << "\nworst-case energy ratios\n";
    for (std::size_t a = 0; a < r.reports.size(); ++a) {
      for (std::size_t b = a + 1; b < r.reports.size(); ++b) {
        const double denom = max_energy(r.reports[b]);
        const std::string name = r.reports[a].strategy + "/" + r.reports[b].strategy;
        if (denom > 0.0) {
          std::snprintf(line, sizeof line, "  %-28s %8.3f\n", name.c_str(), max_energy(r.reports[a]) / denom);
        } else {
          std::snprintf(line, sizeof line, "  %-28s %8s\n", name.c_str(), "n/a");
        }
        out << line;
      }
    }
  }
  return out.str();
}

}  // namespace gbr
