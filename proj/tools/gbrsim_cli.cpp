// gbrsim: command-line front end over the C interface of libgbrsim.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime fault.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gbrsim/gbrsim.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct Overrides {
  std::string preset;
  std::string config_file;
  std::optional<double> radius;
  std::optional<double> density;
  std::optional<std::size_t> sensors;
  std::vector<std::string> bs;
  std::optional<double> comm_radius;
  std::optional<std::uint64_t> rounds;
  std::optional<std::uint64_t> seed_topology;
  std::optional<std::uint64_t> seed_trace;
  std::optional<std::uint64_t> seed_decision;
  std::vector<std::string> strategies;
  std::optional<std::string> out;
  std::optional<double> epsilon_scale;
  std::optional<double> direct_exponent;
  std::optional<std::string> potential;
  std::optional<double> tolerance;
  std::optional<std::uint64_t> check_interval;
  bool log_transmissions = false;
  bool sequential = false;
};

void add_config_flags(CLI::App& cmd, Overrides& o) {
  cmd.add_option("--preset", o.preset, "Built-in scenario (paper, ci)");
  cmd.add_option("--config", o.config_file, "JSON config file; flags override its values")->check(CLI::ExistingFile);
  cmd.add_option("--radius", o.radius, "Deployment disc radius");
  cmd.add_option("--density", o.density, "Sensors per unit area");
  cmd.add_option("--sensors", o.sensors, "Explicit sensor count (overrides density)");
  cmd.add_option("--bs", o.bs, "Base station position x,y (repeatable)");
  cmd.add_option("--comm-radius", o.comm_radius, "Communication radius");
  cmd.add_option("--rounds", o.rounds, "Number of rounds");
  cmd.add_option("--seed-topology", o.seed_topology, "Deployment seed");
  cmd.add_option("--seed-trace", o.seed_trace, "Event trace seed");
  cmd.add_option("--seed-decision", o.seed_decision, "Randomized-strategy decision seed");
  cmd.add_option("--strategy", o.strategies, "standard|mixed|randomized (repeatable)")
      ->check(CLI::IsMember({"standard", "mixed", "randomized"}));
  cmd.add_option("--out", o.out, "Output directory");
  cmd.add_option("--epsilon-scale", o.epsilon_scale, "Weight of spent energy in the potential");
  cmd.add_option("--direct-exponent", o.direct_exponent, "Exponent of the direct transmission cost");
  cmd.add_option("--potential", o.potential, "Static potential: cumulative-sum|cubic")
      ->check(CLI::IsMember({"cumulative-sum", "cubic"}));
  cmd.add_option("--tolerance", o.tolerance, "Relative tolerance of the slice optimizer");
  cmd.add_option("--check-interval", o.check_interval, "Rounds between conservation checks (0 = end only)");
  cmd.add_flag("--log-transmissions", o.log_transmissions, "Write per-transmission CSV logs");
  cmd.add_flag("--sequential", o.sequential, "Run strategies one after another");
}

nlohmann::json overrides_json(const Overrides& o) {
  nlohmann::json j = nlohmann::json::object();
  if (o.radius) j["radius"] = *o.radius;
  if (o.density) j["density"] = *o.density;
  if (o.sensors) j["n_sensors"] = *o.sensors;
  if (!o.bs.empty()) {
    auto arr = nlohmann::json::array();
    for (const auto& s : o.bs) {
      const auto comma = s.find(',');
      if (comma == std::string::npos) throw std::invalid_argument("--bs expects x,y but got '" + s + "'");
      arr.push_back({std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))});
    }
    j["base_stations"] = arr;
  }
  if (o.comm_radius) j["comm_radius"] = *o.comm_radius;
  if (o.rounds) j["rounds"] = *o.rounds;
  nlohmann::json seeds = nlohmann::json::object();
  if (o.seed_topology) seeds["topology"] = *o.seed_topology;
  if (o.seed_trace) seeds["trace"] = *o.seed_trace;
  if (o.seed_decision) seeds["decision"] = *o.seed_decision;
  if (!seeds.empty()) j["seeds"] = seeds;
  if (!o.strategies.empty()) j["strategies"] = o.strategies;
  if (o.out) j["output_dir"] = *o.out;
  if (o.epsilon_scale) j["epsilon_scale"] = *o.epsilon_scale;
  if (o.direct_exponent) j["direct_cost_exponent"] = *o.direct_exponent;
  if (o.potential) j["potential_variant"] = *o.potential;
  if (o.tolerance) j["optimizer_tolerance"] = *o.tolerance;
  if (o.check_interval) j["conservation_check_interval"] = *o.check_interval;
  if (o.log_transmissions) j["log_transmissions"] = true;
  if (o.sequential) j["parallel"] = false;
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int report(gbr_status status, int exit_code) {
  std::cerr << "gbrsim: " << gbr_status_name(status) << ": " << gbr_last_error() << '\n';
  return exit_code;
}

int exit_code_for(gbr_status status) { return status == GBR_ERR_INVALID_ARGUMENT ? kExitConfig : kExitRuntime; }

std::string take(char* s) {
  std::string out = s ? s : "";
  gbr_string_free(s);
  return out;
}

// Resolves preset, config file and flags into a config handle, in that order.
int build_config(const Overrides& o, gbr_config** out) {
  gbr_status st = GBR_OK;
  if (!o.config_file.empty()) {
    st = gbr_config_from_json(read_file(o.config_file).c_str(), out);
    if (st == GBR_OK && !o.preset.empty()) {
      std::cerr << "gbrsim: --preset and --config are mutually exclusive\n";
      gbr_config_free(*out);
      return kExitConfig;
    }
  } else {
    st = gbr_config_preset(o.preset.empty() ? "paper" : o.preset.c_str(), out);
  }
  if (st != GBR_OK) return report(st, kExitConfig);

  std::string overrides;
  try {
    overrides = overrides_json(o).dump();
  } catch (const std::exception& e) {
    std::cerr << "gbrsim: " << e.what() << '\n';
    gbr_config_free(*out);
    return kExitConfig;
  }
  st = gbr_config_merge_json(*out, overrides.c_str());
  if (st != GBR_OK) {
    gbr_config_free(*out);
    return report(st, kExitConfig);
  }

  int ok = 0;
  char* validation = nullptr;
  st = gbr_config_validate(*out, &ok, &validation);
  if (st != GBR_OK) {
    gbr_config_free(*out);
    return report(st, kExitRuntime);
  }
  const auto doc = nlohmann::json::parse(take(validation));
  for (const auto& w : doc["warnings"]) std::cerr << "gbrsim: warning: " << w.get<std::string>() << '\n';
  if (!ok) {
    for (const auto& v : doc["violations"]) std::cerr << "gbrsim: config error: " << v.get<std::string>() << '\n';
    gbr_config_free(*out);
    return kExitConfig;
  }
  return kExitOk;
}

int cmd_run(const Overrides& o, const std::string& topology_path, bool quiet) {
  gbr_config* config = nullptr;
  if (int rc = build_config(o, &config); rc != kExitOk) return rc;

  gbr_topology* topology = nullptr;
  if (!topology_path.empty()) {
    if (auto st = gbr_topology_load(topology_path.c_str(), &topology); st != GBR_OK) {
      gbr_config_free(config);
      return report(st, exit_code_for(st));
    }
  }

  gbr_result* result = nullptr;
  const auto st = gbr_experiment_run(config, topology, &result);
  gbr_topology_free(topology);
  gbr_config_free(config);
  if (st != GBR_OK) return report(st, exit_code_for(st));

  char* table = nullptr;
  char* files = nullptr;
  gbr_result_summary_table(result, &table);
  gbr_result_files(result, &files);
  std::cout << take(table);
  if (!quiet) std::cout << "\nwrote:\n" << take(files);
  else gbr_string_free(files);
  gbr_result_free(result);
  return kExitOk;
}

int cmd_validate(const Overrides& o) {
  gbr_config* config = nullptr;
  if (int rc = build_config(o, &config); rc != kExitOk) return rc;
  char* json = nullptr;
  gbr_config_to_json(config, &json);
  std::cout << take(json) << '\n';
  gbr_config_free(config);
  return kExitOk;
}

int cmd_topology(const Overrides& o, const std::string& path) {
  gbr_config* config = nullptr;
  if (int rc = build_config(o, &config); rc != kExitOk) return rc;
  gbr_topology* topology = nullptr;
  auto st = gbr_topology_generate(config, &topology);
  gbr_config_free(config);
  if (st != GBR_OK) return report(st, exit_code_for(st));
  st = gbr_topology_save(topology, path.c_str());
  if (st == GBR_OK) {
    std::size_t nodes = 0, reachable = 0;
    int height = 0;
    gbr_topology_node_count(topology, &nodes);
    gbr_topology_reachable_count(topology, &reachable);
    gbr_topology_max_height(topology, &height);
    std::cout << "sensors " << nodes << ", reachable " << reachable << ", max height " << height << "\nwrote "
              << path << '\n';
  }
  gbr_topology_free(topology);
  return st == GBR_OK ? kExitOk : report(st, kExitRuntime);
}

int cmd_optimize(const std::string& topology_path, const std::string& out_path, double tolerance, double exponent) {
  gbr_topology* topology = nullptr;
  auto st = gbr_topology_load(topology_path.c_str(), &topology);
  if (st != GBR_OK) return report(st, exit_code_for(st));
  gbr_probabilities* probs = nullptr;
  st = gbr_probabilities_solve(topology, tolerance, exponent, &probs);
  if (st != GBR_OK) {
    gbr_topology_free(topology);
    return report(st, exit_code_for(st));
  }
  double objective = 0.0;
  gbr_probabilities_objective(probs, topology, exponent, &objective);
  char* json = nullptr;
  gbr_probabilities_to_json(probs, &json);
  auto doc = nlohmann::json::parse(take(json));
  doc["objective_per_round"] = objective;
  gbr_probabilities_free(probs);
  gbr_topology_free(topology);

  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) {
    std::cerr << "gbrsim: cannot write " << out_path << '\n';
    return kExitRuntime;
  }
  out << doc.dump(2) << '\n';
  std::cout << "max slice energy per round " << objective << "\nwrote " << out_path << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient-based routing simulator for wireless sensor networks"};
  app.set_version_flag("--version", gbr_version());
  app.require_subcommand(1);

  Overrides run_opts;
  std::string run_topology;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run an experiment and write its outputs");
  add_config_flags(*run, run_opts);
  run->add_option("--topology", run_topology, "Reuse a topology JSON instead of deploying")->check(CLI::ExistingFile);
  run->add_flag("--quiet", quiet, "Do not list written files");

  Overrides validate_opts;
  auto* validate = app.add_subcommand("validate", "Resolve and check a config, printing it as JSON");
  add_config_flags(*validate, validate_opts);

  Overrides topo_opts;
  std::string topo_path = "topology.json";
  auto* topo = app.add_subcommand("topology", "Deploy sensors and write the topology JSON");
  add_config_flags(*topo, topo_opts);
  topo->add_option("--file", topo_path, "Topology JSON path");

  std::string opt_topology;
  std::string opt_out = "probabilities.json";
  double opt_tolerance = 1e-9;
  double opt_exponent = 2.0;
  auto* optimize = app.add_subcommand("optimize", "Compute balanced direct-send probabilities for a topology");
  optimize->add_option("--topology", opt_topology, "Topology JSON")->required()->check(CLI::ExistingFile);
  optimize->add_option("--file", opt_out, "Probabilities JSON path");
  optimize->add_option("--tolerance", opt_tolerance, "Relative tolerance");
  optimize->add_option("--direct-exponent", opt_exponent, "Exponent of the direct transmission cost");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (*run) return cmd_run(run_opts, run_topology, quiet);
  if (*validate) return cmd_validate(validate_opts);
  if (*topo) return cmd_topology(topo_opts, topo_path);
  if (*optimize) return cmd_optimize(opt_topology, opt_out, opt_tolerance, opt_exponent);
  return kExitConfig;
}
