#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "gbrsim_cli_test";

int gbrsim(const std::string& args) {
  const std::string cmd = std::string(GBRSIM_CLI_PATH) + " " + args + " > " + (kWork / "stdout.txt").string() +
                          " 2> " + (kWork / "stderr.txt").string();
  const int raw = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(raw));
  return WEXITSTATUS(raw);
}

// File body without the leading provenance comment, which names the output directory.
std::string body(const std::string& text) { return text.substr(text.find('\n') + 1); }

std::string read(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kSmall = "--preset ci --radius 5 --bs -2.5,0 --bs 2.5,0 --rounds 2000";

struct Workdir {
  Workdir() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
  }
};

}  // namespace

TEST_CASE("run writes outputs and exits 0") {
  Workdir w;
  const auto out = kWork / "run";
  CHECK(gbrsim("run " + kSmall + " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "summary.json"));
  CHECK(fs::exists(out / "energy_map.csv"));
  CHECK(read(kWork / "stdout.txt").find("standard/mixed") != std::string::npos);
}

TEST_CASE("config errors exit 1") {
  Workdir w;
  CHECK(gbrsim("run --radius -1 --out " + (kWork / "bad").string()) == 1);
  CHECK(read(kWork / "stderr.txt").find("radius") != std::string::npos);
  CHECK_FALSE(fs::exists(kWork / "bad" / "summary.json"));
  CHECK(gbrsim("run --strategy greedy") == 1);
  CHECK(gbrsim("run --bs 1") == 1);
  CHECK(gbrsim("run --preset nowhere") == 1);
  CHECK(gbrsim("") == 1);
  CHECK(gbrsim("run --config /nonexistent.json") == 1);
}

TEST_CASE("runtime faults exit 2") {
  Workdir w;
  CHECK(gbrsim("run " + kSmall + " --bs 100,100 --out " + (kWork / "x").string()) == 0);
  CHECK(gbrsim("run --preset ci --radius 5 --bs 100,100 --rounds 10 --out " + (kWork / "y").string()) == 2);
}

TEST_CASE("validate prints the resolved config") {
  Workdir w;
  CHECK(gbrsim("validate --preset paper --rounds 7") == 0);
  const auto doc = nlohmann::json::parse(read(kWork / "stdout.txt"));
  CHECK(doc["rounds"] == 7);
  CHECK(doc["resolved_sensors"] == 3769);
  CHECK(gbrsim("validate --comm-radius 0") == 1);
}

TEST_CASE("config file with flag overrides") {
  Workdir w;
  const auto cfg = kWork / "cfg.json";
  std::ofstream(cfg) << R"({"preset": "ci", "radius": 5, "base_stations": [[-2.5, 0], [2.5, 0]], "rounds": 99})";
  CHECK(gbrsim("validate --config " + cfg.string() + " --rounds 5") == 0);
  CHECK(nlohmann::json::parse(read(kWork / "stdout.txt"))["rounds"] == 5);
}

TEST_CASE("topology then optimize then run from the saved topology") {
  Workdir w;
  const auto topo = kWork / "t.json";
  const auto probs = kWork / "p.json";
  CHECK(gbrsim("topology " + kSmall + " --file " + topo.string()) == 0);
  REQUIRE(fs::exists(topo));
  CHECK(gbrsim("optimize --topology " + topo.string() + " --file " + probs.string()) == 0);
  const auto p = nlohmann::json::parse(read(probs));
  CHECK(p["probabilities"][0] == 0.0);
  CHECK(gbrsim("optimize --topology " + topo.string() + " --tolerance -1") == 1);

  const auto a = kWork / "a";
  const auto b = kWork / "b";
  CHECK(gbrsim("run " + kSmall + " --quiet --out " + a.string()) == 0);
  CHECK(gbrsim("run " + kSmall + " --quiet --topology " + topo.string() + " --out " + b.string()) == 0);
  for (const char* f : {"energy_map.csv", "slice_profile.csv", "distance_profile.csv"}) {
    CAPTURE(f);
    CHECK(body(read(a / f)) == body(read(b / f)));
  }
}
