#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "gbrsim/errors.hpp"
#include "gbrsim/experiment.hpp"
#include "gbrsim/metrics.hpp"
#include "gbrsim/output.hpp"

using namespace gbr;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> snapshot_dir(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) files[e.path().filename().string()] = slurp(e.path());
  return files;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("gbrsim_test_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentConfig small_config(const fs::path& out) {
  auto c = preset_config("ci");
  c.radius = 5.0;
  c.bs_positions = {{-2.5, 0}, {2.5, 0}};
  c.n_rounds = 5000;
  c.output_dir = out;
  return c;
}

}  // namespace

TEST_CASE("paper preset resolves to the published scenario") {
  const auto c = preset_config("paper");
  CHECK(c.resolved_sensor_count() == 3769);
  CHECK(c.radius == 20.0);
  CHECK(c.comm_radius == 1.0);
  CHECK(c.n_rounds == 5'000'000);
  CHECK(c.bs_positions.size() == 2);
  CHECK(validate_config(c).ok());
  CHECK(validate_config(c).warnings.empty());
  CHECK_THROWS_AS(preset_config("nope"), InvalidArgument);
}

TEST_CASE("validation reports violations") {
  auto c = preset_config("paper");
  c.radius = -1;
  CHECK_FALSE(validate_config(c).ok());

  c = preset_config("paper");
  c.strategies.clear();
  CHECK_FALSE(validate_config(c).ok());

  c = preset_config("paper");
  c.trace_seed.reset();
  const auto v = validate_config(c);
  REQUIRE(v.violations.size() == 1);
  CHECK(v.violations[0].find("trace seed") != std::string::npos);

  c = preset_config("paper");
  c.bs_positions.push_back({50, 0});
  const auto w = validate_config(c);
  CHECK(w.ok());
  CHECK(w.warnings.size() == 1);
}

TEST_CASE("config JSON round trip and overrides") {
  auto c = preset_config("paper");
  c.n_sensors = 100;
  c.potential_variant = PotentialVariant::Cubic;
  c.strategies = {StrategySelector::Mixed};
  const auto back = config_from_json(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));

  const auto merged = config_from_json(nlohmann::json{{"preset", "ci"}, {"rounds", 12}, {"seeds", {{"trace", 9}}}});
  CHECK(merged.radius == 8.0);
  CHECK(merged.n_rounds == 12);
  CHECK(merged.trace_seed == 9u);
  CHECK(merged.topology_seed == 1u);

  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"radious", 3}}), InvalidArgument);
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"strategies", {"greedy"}}}), InvalidArgument);
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"rounds", "many"}}), InvalidArgument);
}

TEST_CASE("experiment writes every output with provenance") {
  const auto dir = scratch("outputs");
  const auto result = run_experiment(small_config(dir));
  for (const char* f : {"topology.json", "probabilities.json", "summary.json", "slice_profile.csv",
                        "distance_profile.csv", "energy_map.csv"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(dir / f));
  }
  for (const char* f : {"slice_profile.csv", "distance_profile.csv", "energy_map.csv"}) {
    CHECK(slurp(dir / f).rfind("# gbrsim config={", 0) == 0);
  }
  const auto summary = read_json_file(dir / "summary.json");
  CHECK(summary["config"]["seeds"]["trace"] == 2);
  CHECK(summary["strategies"].size() == 3);
  CHECK(summary["ratios"].size() == 6);
  CHECK(summary.contains("randomized_ideal_max_energy"));
  CHECK(read_json_file(dir / "topology.json").contains("config"));
  CHECK(read_json_file(dir / "probabilities.json").contains("config"));

  const auto map = slurp(dir / "energy_map.csv");
  CHECK(map.find("node,x,y,height,energy_standard,energy_mixed,energy_randomized\n") != std::string::npos);
  const auto profile = slurp(dir / "slice_profile.csv");
  CHECK(profile.find("height,count,mean_energy_standard,mean_energy_mixed,mean_energy_randomized,ideal_randomized") !=
        std::string::npos);
  CHECK(summary_table(result).find("standard/mixed") != std::string::npos);
}

TEST_CASE("experiment outputs are byte-identical across executions") {
  const auto dir = scratch("determinism");
  auto c = small_config(dir);
  c.log_transmissions = true;
  run_experiment(c);
  const auto first = snapshot_dir(dir);
  run_experiment(c);
  CHECK(snapshot_dir(dir) == first);
  CHECK(first.count("transmissions_mixed.csv") == 1);
}

TEST_CASE("re-running from an emitted topology reproduces the run") {
  const auto dir = scratch("reload");
  const auto c = small_config(dir);
  const auto original = run_experiment(c);
  const auto first = snapshot_dir(dir);
  const auto topo = topology_from_json(read_json_file(dir / "topology.json"));
  const auto again = run_experiment(c, &topo);
  for (std::size_t i = 0; i < original.reports.size(); ++i) {
    CHECK(again.reports[i].energy_spent == original.reports[i].energy_spent);
  }
  CHECK(snapshot_dir(dir) == first);
}

TEST_CASE("zero rounds gives all-zero energies") {
  auto c = small_config(scratch("zero"));
  c.n_rounds = 0;
  const auto r = run_experiment(c);
  for (const auto& rep : r.reports) {
    CHECK(max_energy(rep) == 0.0);
    CHECK(rep.generated == 0);
  }
  const auto summary = read_json_file(c.output_dir / "summary.json");
  CHECK(summary["ratios"][0]["value"].is_null());
}

TEST_CASE("duplicate strategies get distinct labels") {
  auto c = small_config(scratch("dupes"));
  c.strategies = {StrategySelector::Mixed, StrategySelector::Mixed};
  const auto r = simulate_experiment(c);
  CHECK(r.labels == std::vector<std::string>{"mixed", "mixed_2"});
  CHECK(r.reports[0].energy_spent == r.reports[1].energy_spent);
  CHECK_FALSE(r.optimum.has_value());
}

TEST_CASE("failures surface as typed errors") {
  auto c = small_config(scratch("bad"));
  c.comm_radius = -2;
  CHECK_THROWS_AS(simulate_experiment(c), InvalidArgument);

  c = small_config(scratch("disconnected"));
  c.bs_positions = {{100, 100}};
  CHECK_THROWS_AS(simulate_experiment(c), RoutingFault);
}

TEST_CASE("number formatting is shortest round-trip") {
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(83448) == "83448");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}
