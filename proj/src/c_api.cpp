#include "gbrsim/gbrsim.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <string>

#include "gbrsim/engine.hpp"
#include "gbrsim/errors.hpp"
#include "gbrsim/experiment.hpp"
#include "gbrsim/metrics.hpp"
#include "gbrsim/optimizer.hpp"
#include "gbrsim/output.hpp"

struct gbr_config {
  gbr::ExperimentConfig value;
};

struct gbr_topology {
  gbr::Topology value;
};

struct gbr_probabilities {
  gbr::DirectProbabilities value;
};

struct gbr_simulation {
  gbr_simulation(const gbr::Topology& t, gbr::StrategyKind s, gbr::SimulationOptions o, std::uint64_t trace_seed)
      : topology(&t), sim(t, std::move(s), o), trace_seed(trace_seed) {}

  const gbr::Topology* topology;
  gbr::Simulation sim;
  std::uint64_t trace_seed;
};

struct gbr_result {
  gbr::ExperimentResult value;
};

namespace {

thread_local std::string last_error;

gbr_status fail(gbr_status status, const char* message) {
  last_error = message;
  return status;
}

// Runs `fn`, mapping the core's exception types onto status codes.
template <class Fn>
gbr_status guarded(Fn&& fn) noexcept {
  try {
    last_error.clear();
    fn();
    return GBR_OK;
  } catch (const gbr::InvalidArgument& e) {
    return fail(GBR_ERR_INVALID_ARGUMENT, e.what());
  } catch (const gbr::RoutingFault& e) {
    return fail(GBR_ERR_ROUTING_FAULT, e.what());
  } catch (const gbr::ConvergenceError& e) {
    return fail(GBR_ERR_CONVERGENCE, e.what());
  } catch (const gbr::ConservationError& e) {
    return fail(GBR_ERR_CONSERVATION, e.what());
  } catch (const gbr::IoError& e) {
    return fail(GBR_ERR_IO, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(GBR_ERR_IO, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(GBR_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(GBR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(GBR_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(GBR_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw gbr::InvalidArgument(std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

nlohmann::json parse_json(const char* text) {
  require(text, "json");
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw gbr::InvalidArgument(e.what());
  }
}

const gbr::EnergyReport& report_at(const gbr_result* r, size_t index) {
  require(r, "result");
  if (index >= r->value.reports.size()) throw gbr::InvalidArgument("strategy index out of range");
  return r->value.reports[index];
}

}  // namespace

extern "C" {

const char* gbr_version(void) { return "0.1.0"; }

const char* gbr_status_name(gbr_status status) {
  switch (status) {
    case GBR_OK:
      return "ok";
    case GBR_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case GBR_ERR_ROUTING_FAULT:
      return "routing fault";
    case GBR_ERR_CONVERGENCE:
      return "optimizer non-convergence";
    case GBR_ERR_CONSERVATION:
      return "message conservation violated";
    case GBR_ERR_IO:
      return "i/o error";
    case GBR_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* gbr_last_error(void) { return last_error.c_str(); }

void gbr_string_free(char* s) { std::free(s); }

gbr_status gbr_config_preset(const char* name, gbr_config** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = new gbr_config{gbr::preset_config(name)};
  });
}

gbr_status gbr_config_from_json(const char* json, gbr_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new gbr_config{gbr::config_from_json(parse_json(json))};
  });
}

gbr_status gbr_config_merge_json(gbr_config* config, const char* json) {
  return guarded([&] {
    require(config, "config");
    config->value = gbr::config_from_json(parse_json(json), config->value);
  });
}

gbr_status gbr_config_to_json(const gbr_config* config, char** out_json) {
  return guarded([&] {
    require(config, "config");
    require(out_json, "out_json");
    *out_json = dup_string(gbr::config_to_json(config->value).dump(2));
  });
}

gbr_status gbr_config_validate(const gbr_config* config, int* out_ok, char** out_report) {
  return guarded([&] {
    require(config, "config");
    require(out_ok, "out_ok");
    const auto report = gbr::validate_config(config->value);
    *out_ok = report.ok() ? 1 : 0;
    if (out_report != nullptr) {
      *out_report = dup_string(nlohmann::json{{"violations", report.violations}, {"warnings", report.warnings}}.dump());
    }
  });
}

void gbr_config_free(gbr_config* config) { delete config; }

gbr_status gbr_topology_generate(const gbr_config* config, gbr_topology** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    const auto& c = config->value;
    if (!c.topology_seed) throw gbr::InvalidArgument("topology seed is missing");
    auto deployment = gbr::deploy_uniform_disc(c.resolved_sensor_count(), c.radius, c.bs_positions, *c.topology_seed);
    *out = new gbr_topology{gbr::build_topology(std::move(deployment), c.comm_radius)};
  });
}

gbr_status gbr_topology_from_json(const char* json, gbr_topology** out) {
  return guarded([&] {
    require(out, "out");
    *out = new gbr_topology{gbr::topology_from_json(parse_json(json))};
  });
}

gbr_status gbr_topology_load(const char* path, gbr_topology** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new gbr_topology{gbr::topology_from_json(gbr::read_json_file(path))};
  });
}

gbr_status gbr_topology_to_json(const gbr_topology* topology, char** out_json) {
  return guarded([&] {
    require(topology, "topology");
    require(out_json, "out_json");
    *out_json = dup_string(gbr::topology_to_json(topology->value).dump());
  });
}

gbr_status gbr_topology_save(const gbr_topology* topology, const char* path) {
  return guarded([&] {
    require(topology, "topology");
    require(path, "path");
    gbr::write_json_file(path, gbr::topology_to_json(topology->value));
  });
}

gbr_status gbr_topology_node_count(const gbr_topology* topology, size_t* out) {
  return guarded([&] {
    require(topology, "topology");
    require(out, "out");
    *out = topology->value.size();
  });
}

gbr_status gbr_topology_reachable_count(const gbr_topology* topology, size_t* out) {
  return guarded([&] {
    require(topology, "topology");
    require(out, "out");
    *out = topology->value.reachable_nodes().size();
  });
}

gbr_status gbr_topology_max_height(const gbr_topology* topology, int* out) {
  return guarded([&] {
    require(topology, "topology");
    require(out, "out");
    *out = topology->value.max_height();
  });
}

gbr_status gbr_topology_height(const gbr_topology* topology, uint32_t node, int* out) {
  return guarded([&] {
    require(topology, "topology");
    require(out, "out");
    if (node >= topology->value.size()) throw gbr::InvalidArgument("node id out of range");
    *out = topology->value.height(node);
  });
}

void gbr_topology_free(gbr_topology* topology) { delete topology; }

gbr_status gbr_probabilities_solve(const gbr_topology* topology, double tolerance, double direct_cost_exponent,
                                   gbr_probabilities** out) {
  return guarded([&] {
    require(topology, "topology");
    require(out, "out");
    const auto profile = gbr::slice_profile_from_topology(topology->value);
    *out = new gbr_probabilities{gbr::solve_balanced_probabilities(profile, tolerance, direct_cost_exponent)};
  });
}

gbr_status gbr_probabilities_create(const double* by_height, size_t count, gbr_probabilities** out) {
  return guarded([&] {
    require(out, "out");
    if (count > 0) require(by_height, "by_height");
    std::vector<double> values(by_height, by_height + count);
    *out = new gbr_probabilities{gbr::DirectProbabilities(std::move(values))};
  });
}

gbr_status gbr_probabilities_from_json(const char* json, gbr_probabilities** out) {
  return guarded([&] {
    require(out, "out");
    *out = new gbr_probabilities{gbr::probabilities_from_json(parse_json(json))};
  });
}

gbr_status gbr_probabilities_to_json(const gbr_probabilities* probs, char** out_json) {
  return guarded([&] {
    require(probs, "probs");
    require(out_json, "out_json");
    *out_json = dup_string(gbr::probabilities_to_json(probs->value).dump());
  });
}

gbr_status gbr_probabilities_count(const gbr_probabilities* probs, size_t* out) {
  return guarded([&] {
    require(probs, "probs");
    require(out, "out");
    *out = probs->value.values().size();
  });
}

gbr_status gbr_probabilities_get(const gbr_probabilities* probs, int height, double* out) {
  return guarded([&] {
    require(probs, "probs");
    require(out, "out");
    *out = probs->value.at(height);
  });
}

gbr_status gbr_probabilities_objective(const gbr_probabilities* probs, const gbr_topology* topology,
                                       double direct_cost_exponent, double* out) {
  return guarded([&] {
    require(probs, "probs");
    require(topology, "topology");
    require(out, "out");
    const auto profile = gbr::slice_profile_from_topology(topology->value);
    *out = gbr::evaluate_slice_energies(profile, probs->value, direct_cost_exponent).max_slice_energy();
  });
}

void gbr_probabilities_free(gbr_probabilities* probs) { delete probs; }

gbr_status gbr_simulation_create(const gbr_topology* topology, gbr_strategy strategy, const gbr_probabilities* probs,
                                 uint64_t trace_seed, uint64_t decision_seed, gbr_simulation** out) {
  return guarded([&] {
    require(topology, "topology");
    require(out, "out");
    gbr::StrategyKind kind = gbr::StrategyKind::standard();
    switch (strategy) {
      case GBR_STRATEGY_STANDARD:
        break;
      case GBR_STRATEGY_MIXED:
        kind = gbr::StrategyKind::mixed();
        break;
      case GBR_STRATEGY_RANDOMIZED:
        require(probs, "probs");
        kind = gbr::StrategyKind::randomized(probs->value);
        break;
      default:
        throw gbr::InvalidArgument("unknown strategy");
    }
    gbr::SimulationOptions options;
    options.decision_seed = decision_seed;
    *out = new gbr_simulation(topology->value, std::move(kind), options, trace_seed);
  });
}

gbr_status gbr_simulation_run(gbr_simulation* sim, uint64_t rounds) {
  return guarded([&] {
    require(sim, "sim");
    const auto start = sim->sim.state().round;
    const gbr::EventTrace trace(*sim->topology, sim->trace_seed, start + rounds);
    for (std::uint64_t r = start; r < start + rounds; ++r) sim->sim.step(trace.event_at(r));
    sim->sim.check_conservation();
  });
}

gbr_status gbr_simulation_step_with_event(gbr_simulation* sim, uint32_t event_node) {
  return guarded([&] {
    require(sim, "sim");
    sim->sim.step(event_node);
  });
}

gbr_status gbr_simulation_round(const gbr_simulation* sim, uint64_t* out) {
  return guarded([&] {
    require(sim, "sim");
    require(out, "out");
    *out = sim->sim.state().round;
  });
}

gbr_status gbr_simulation_counts(const gbr_simulation* sim, uint64_t* generated, uint64_t* delivered,
                                 uint64_t* queued) {
  return guarded([&] {
    require(sim, "sim");
    const auto& s = sim->sim.state();
    if (generated) *generated = s.generated;
    if (delivered) *delivered = s.delivered;
    if (queued) *queued = s.total_queued();
  });
}

gbr_status gbr_simulation_energies(const gbr_simulation* sim, double* out, size_t len) {
  return guarded([&] {
    require(sim, "sim");
    require(out, "out");
    const auto& e = sim->sim.state().energy_spent;
    if (len < e.size()) throw gbr::InvalidArgument("output buffer smaller than the node count");
    std::copy(e.begin(), e.end(), out);
  });
}

gbr_status gbr_simulation_max_energy(const gbr_simulation* sim, double* out) {
  return guarded([&] {
    require(sim, "sim");
    require(out, "out");
    gbr::EnergyReport r;
    r.energy_spent = sim->sim.state().energy_spent;
    *out = gbr::max_energy(r);
  });
}

void gbr_simulation_free(gbr_simulation* sim) { delete sim; }

gbr_status gbr_experiment_run(const gbr_config* config, const gbr_topology* topology, gbr_result** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    *out = new gbr_result{gbr::run_experiment(config->value, topology ? &topology->value : nullptr)};
  });
}

gbr_status gbr_result_strategy_count(const gbr_result* result, size_t* out) {
  return guarded([&] {
    require(result, "result");
    require(out, "out");
    *out = result->value.reports.size();
  });
}

gbr_status gbr_result_strategy_label(const gbr_result* result, size_t index, char** out) {
  return guarded([&] {
    require(out, "out");
    *out = dup_string(report_at(result, index).strategy);
  });
}

gbr_status gbr_result_max_energy(const gbr_result* result, size_t index, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = gbr::max_energy(report_at(result, index));
  });
}

gbr_status gbr_result_summary_json(const gbr_result* result, char** out_json) {
  return guarded([&] {
    require(result, "result");
    require(out_json, "out_json");
    *out_json = dup_string(gbr::summary_json(result->value).dump(2));
  });
}

gbr_status gbr_result_summary_table(const gbr_result* result, char** out_text) {
  return guarded([&] {
    require(result, "result");
    require(out_text, "out_text");
    *out_text = dup_string(gbr::summary_table(result->value));
  });
}

gbr_status gbr_result_files(const gbr_result* result, char** out_text) {
  return guarded([&] {
    require(result, "result");
    require(out_text, "out_text");
    std::string text;
    for (const auto& f : result->value.files) text += f.generic_string() + "\n";
    *out_text = dup_string(text);
  });
}

void gbr_result_free(gbr_result* result) { delete result; }

}  // extern "C"
