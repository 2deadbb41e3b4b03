#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "gbrsim/errors.hpp"
#include "gbrsim/protocols.hpp"
#include "gbrsim/rng.hpp"
#include "oracles.hpp"

using namespace gbr;

namespace {

NodeSnapshot node(NodeId id, int height, double energy, std::uint32_t queue = 0) {
  return {id, height, energy, queue};
}

}  // namespace

TEST_CASE("static potential small values") {
  CHECK(static_potential(0) == 0);
  CHECK(static_potential(1) == 1);
  CHECK(static_potential(4) == 30);
  CHECK_THROWS_AS(static_potential(-1), InvalidArgument);
}

TEST_CASE("static potential closed form equals loop summation up to 1000") {
  for (int h = 0; h <= 1000; ++h) {
    REQUIRE(static_potential(h) == oracle::loop_static_potential(h));
    if (h > 0) REQUIRE(static_potential(h) > static_potential(h - 1));
  }
}

TEST_CASE("cubic variant") {
  CHECK(static_potential(3, PotentialVariant::Cubic) == 27.0);
  CHECK(static_potential(3, PotentialVariant::CumulativeSquares) == 14.0);
  CHECK(potential_variant_from_string("cubic") == PotentialVariant::Cubic);
  CHECK_THROWS_AS(potential_variant_from_string("quartic"), InvalidArgument);
}

TEST_CASE("node potential") {
  CHECK(node_potential(node(0, 3, 0.0)) == 14.0);
  CHECK(node_potential(node(0, 0, 7.5)) == 7.5);
  CHECK(node_potential(node(0, 2, 4.0)) == 9.0);
  ProtocolParams scaled;
  scaled.epsilon_scale = 0.5;
  CHECK(node_potential(node(0, 2, 4.0), scaled) == 7.0);
}

TEST_CASE("mixed rule picks the lowest-potential neighbour") {
  const auto self = node(0, 3, 5.0, 1);                              // 14 + 5 = 19
  const std::vector<NodeSnapshot> nbs{node(1, 3, 8.0), node(2, 2, 13.0)};  // 22, 18
  CHECK(mixed_gbr_decide(self, nbs) == RoutingDecision::forward(2));
}

TEST_CASE("mixed rule goes direct when every neighbour is strictly higher") {
  const auto self = node(0, 3, 0.0, 1);  // 14
  const std::vector<NodeSnapshot> nbs{node(1, 3, 1.0), node(2, 2, 10.0), node(3, 4, 0.0)};
  CHECK(mixed_gbr_decide(self, nbs) == RoutingDecision::direct());
}

TEST_CASE("mixed rule forwards on equal potential") {
  const auto self = node(0, 3, 5.0, 1);  // 19
  const std::vector<NodeSnapshot> nbs{node(4, 2, 14.0), node(5, 3, 9.0)};  // 19, 23
  CHECK(mixed_gbr_decide(self, nbs) == RoutingDecision::forward(4));
}

TEST_CASE("mixed rule tie-break, isolated node and height one") {
  const auto self = node(0, 3, 5.0, 1);
  const std::vector<NodeSnapshot> tied{node(9, 2, 1.0), node(3, 2, 1.0)};
  CHECK(mixed_gbr_decide(self, tied) == RoutingDecision::forward(3));
  CHECK(mixed_gbr_decide(self, {}) == RoutingDecision::direct());
  CHECK(mixed_gbr_decide(node(0, 1, 500.0, 1), tied) == RoutingDecision::sink());
  CHECK_THROWS_AS(mixed_gbr_decide(node(0, kUnreachable, 0.0, 1), tied), RoutingFault);
}

TEST_CASE("mixed rule is invariant under a common energy shift") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> height(1, 12);
  std::uniform_real_distribution<double> energy(0.0, 400.0);
  std::uniform_int_distribution<int> degree(0, 8);
  for (int trial = 0; trial < 2000; ++trial) {
    auto self = node(0, height(rng), energy(rng), 1);
    std::vector<NodeSnapshot> nbs;
    const int k = degree(rng);
    for (int i = 0; i < k; ++i) {
      const int h = std::clamp(self.height + static_cast<int>(rng() % 3) - 1, 1, 13);
      nbs.push_back(node(static_cast<NodeId>(i + 1), h, std::round(energy(rng))));
    }
    self.energy_spent = std::round(self.energy_spent);
    const auto before = mixed_gbr_decide(self, nbs);
    const double shift = static_cast<double>(rng() % 1000);
    auto shifted_self = self;
    shifted_self.energy_spent += shift;
    auto shifted = nbs;
    for (auto& n : shifted) n.energy_spent += shift;
    REQUIRE(mixed_gbr_decide(shifted_self, shifted) == before);
  }
}

TEST_CASE("with zero energy the mixed rule descends whenever it can") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const int h = 2 + static_cast<int>(rng() % 20);
    const auto self = node(0, h, 0.0, 1);
    std::vector<NodeSnapshot> nbs;
    for (NodeId i = 1; i <= 6; ++i) nbs.push_back(node(i, h - 1 + static_cast<int>(rng() % 3), 0.0));
    nbs.push_back(node(7, h - 1, 0.0));
    const auto d = mixed_gbr_decide(self, nbs);
    REQUIRE(d.kind == RoutingDecision::Kind::Forward);
    REQUIRE(nbs[d.target - 1].height == h - 1);
  }
}

TEST_CASE("standard rule picks the least-spent lower neighbour") {
  const auto self = node(0, 4, 0.0, 1);
  const std::vector<NodeSnapshot> nbs{node(8, 3, 5.0), node(6, 3, 3.0), node(2, 3, 3.0), node(1, 4, 0.0),
                                      node(3, 5, 0.0)};
  CHECK(standard_gbr_decide(self, nbs) == RoutingDecision::forward(2));
}

TEST_CASE("standard rule at height one and without lower neighbours") {
  CHECK(standard_gbr_decide(node(0, 1, 0.0, 1), {}) == RoutingDecision::sink());
  const std::vector<NodeSnapshot> flat{node(1, 2, 0.0), node(2, 3, 0.0)};
  CHECK_THROWS_AS(standard_gbr_decide(node(0, 2, 0.0, 1), flat), RoutingFault);
}

TEST_CASE("randomized rule degenerate probabilities") {
  const auto self = node(0, 3, 0.0, 1);
  const std::vector<NodeSnapshot> nbs{node(1, 2, 4.0), node(2, 2, 1.0), node(3, 3, 0.0)};
  SplitMix64 rng(5);
  const DirectProbabilities always({0.0, 0.0, 1.0});
  const DirectProbabilities never({0.0, 0.0, 0.0});
  for (int i = 0; i < 100; ++i) {
    CHECK(randomized_decide(self, nbs, always, rng) == RoutingDecision::direct());
    CHECK(randomized_decide(self, nbs, never, rng) == standard_gbr_decide(self, nbs));
  }
}

TEST_CASE("randomized rule direct frequency") {
  const auto self = node(0, 2, 0.0, 1);
  const std::vector<NodeSnapshot> nbs{node(1, 1, 0.0)};
  const DirectProbabilities probs({0.0, 0.3});
  SplitMix64 rng(2024);
  int direct = 0;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) direct += randomized_decide(self, nbs, probs, rng).kind == RoutingDecision::Kind::Direct;
  CHECK(std::abs(static_cast<double>(direct) / trials - 0.3) <= 0.01);
}

TEST_CASE("randomized rule is a pure function of the generator state") {
  const auto self = node(0, 2, 0.0, 1);
  const std::vector<NodeSnapshot> nbs{node(1, 1, 0.0)};
  const DirectProbabilities probs({0.0, 0.5});
  SplitMix64 a(77), b(77);
  for (int i = 0; i < 1000; ++i) REQUIRE(randomized_decide(self, nbs, probs, a) == randomized_decide(self, nbs, probs, b));
}

TEST_CASE("direct probabilities validation and JSON") {
  CHECK_THROWS_AS(DirectProbabilities({0.5, 1.5}), InvalidArgument);
  CHECK_THROWS_AS(DirectProbabilities({-0.1}), InvalidArgument);
  const DirectProbabilities p({0.0, 0.25, 1.0});
  CHECK(p.at(2) == 0.25);
  CHECK_THROWS_AS(p.at(0), InvalidArgument);
  CHECK_THROWS_AS(p.at(4), InvalidArgument);
  CHECK(probabilities_from_json(probabilities_to_json(p)) == p);
  CHECK(probabilities_from_json(nlohmann::json::array({0.0, 0.5})) == DirectProbabilities({0.0, 0.5}));
}

TEST_CASE("transmission cost") {
  CHECK(transmission_cost(RoutingDecision::forward(3), 7) == 1.0);
  CHECK(transmission_cost(RoutingDecision::sink(), 1) == 1.0);
  CHECK(transmission_cost(RoutingDecision::direct(), 5) == 25.0);
  CHECK(transmission_cost(RoutingDecision::direct(), 1) == 1.0);
  CHECK(transmission_cost(RoutingDecision::direct(), 3, 3.0) == doctest::Approx(27.0));
  CHECK_THROWS_AS(transmission_cost(RoutingDecision::direct(), 0), InvalidArgument);
}
