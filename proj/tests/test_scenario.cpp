#include <gtest/gtest.h>

#include <json.hpp>

#include <filesystem>

#include "docsdn/fixtures/fixtures.hpp"
#include "docsdn/scenario/scenario.hpp"

using namespace docsdn;
using nlohmann::ordered_json;

namespace {

bool mentions(const std::vector<Violation>& v, const std::string& needle) {
  for (const auto& x : v) {
    if (x.message.find(needle) != std::string::npos || x.entity.find(needle) != std::string::npos) {
      return true;
    }
  }
  return false;
}

ordered_json toy_json() { return ordered_json::parse(serialize_scenario(toy_scenario())); }

}  // namespace

TEST(Scenario, ToyShape) {
  const Scenario s = toy_scenario();
  EXPECT_EQ(s.nodes.size(), 7u);
  EXPECT_EQ(s.edges.size(), 10u);
  EXPECT_TRUE(validate_scenario(s).empty());
}

TEST(Scenario, RoundTripToy) {
  const Scenario s = toy_scenario();
  EXPECT_EQ(parse_scenario(serialize_scenario(s)), s);
}

TEST(Scenario, RoundTripFatTreeAndSeeds) {
  for (std::uint64_t seed : {1u, 7u, 99u}) {
    FatTreeScenarioSpec spec;
    spec.seed = seed;
    const Scenario s = fat_tree_scenario(spec);
    EXPECT_TRUE(validate_scenario(s).empty());
    EXPECT_EQ(parse_scenario(serialize_scenario(s)), s);
  }
}

TEST(Scenario, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "docsdn_scenario_rt.json";
  const Scenario s = toy_scenario({.h1_risk = 3.5});
  save_scenario_file(s, path.string());
  EXPECT_EQ(load_scenario_file(path.string()), s);
  std::filesystem::remove(path);
}

TEST(Scenario, WildcardFlowRejected) {
  auto j = toy_json();
  j["flows"][0]["type"] = "*";
  EXPECT_THROW(parse_scenario(j.dump()), ScenarioError);
}

TEST(Scenario, RiskBelowOneRejected) {
  auto j = toy_json();
  for (auto& r : j["risk"]) {
    if (r["node"] == "H1") r["value"] = 0.5;
  }
  EXPECT_THROW(parse_scenario(j.dump()), ScenarioError);
}

TEST(Scenario, SyntaxErrorRejected) {
  EXPECT_THROW(parse_scenario("{\"nodes\": [}"), ScenarioError);
}

TEST(Scenario, UnknownKeyRejected) {
  auto j = toy_json();
  j["bogus"] = 1;
  EXPECT_THROW(parse_scenario(j.dump()), ScenarioError);
}

TEST(Scenario, DegenerateFlow) {
  Scenario s = toy_scenario();
  s.flows[0].dst = s.flows[0].src;
  const auto v = validate_scenario(s);
  ASSERT_FALSE(v.empty());
  EXPECT_TRUE(mentions(v, "degenerate"));
}

TEST(Scenario, UnreachableEndpoint) {
  Scenario s = toy_scenario();
  s.nodes.push_back({"H9", NodeKind::kHost, 0.0});
  for (const auto& t : s.traffic_types) s.risk.risk[{"H9", t}] = 1.0;
  s.flows.push_back({"H9", "G1", "web", 1.0});
  EXPECT_TRUE(mentions(validate_scenario(s), "unreachable"));
}

TEST(Scenario, OtherViolations) {
  {
    Scenario s = toy_scenario();
    s.nodes.push_back(s.nodes.front());
    EXPECT_FALSE(validate_scenario(s).empty());
  }
  {
    Scenario s = toy_scenario();
    s.edges.push_back({"S1", "NOPE", 1.0, 1.0});
    EXPECT_FALSE(validate_scenario(s).empty());
  }
  {
    Scenario s = toy_scenario();
    s.edges[0].capacity = -1.0;
    EXPECT_FALSE(validate_scenario(s).empty());
  }
  {
    Scenario s = toy_scenario();
    s.flows[0].type = "ftp";
    EXPECT_FALSE(validate_scenario(s).empty());
  }
  {
    Scenario s = toy_scenario();
    s.flows[0].demand = 0.0;
    EXPECT_FALSE(validate_scenario(s).empty());
  }
  {
    Scenario s = toy_scenario();
    s.paths_per_pair = 0;
    EXPECT_FALSE(validate_scenario(s).empty());
  }
  {
    Scenario s = toy_scenario();
    s.flows.push_back(s.flows.front());
    EXPECT_FALSE(validate_scenario(s).empty());
  }
}

TEST(Scenario, MissingRiskFilledWithDefault) {
  auto j = toy_json();
  ordered_json kept = ordered_json::array();
  for (const auto& r : j["risk"]) {
    if (r["node"] != "S2") kept.push_back(r);
  }
  j["risk"] = kept;
  const Scenario s = parse_scenario(j.dump());
  EXPECT_DOUBLE_EQ(s.risk.at("S2", "web"), 1.0);
}

TEST(Scenario, FirewallCostWildcardDefaultsToSum) {
  SecurityCosts c;
  c.fw_cost = {{"a", 1.5}, {"b", 2.0}};
  EXPECT_DOUBLE_EQ(c.firewall_cost("*", {"a", "b"}), 3.5);
  c.fw_cost["*"] = 1.0;
  EXPECT_DOUBLE_EQ(c.firewall_cost("*", {"a", "b"}), 1.0);
}

TEST(FatTreeFixture, Counts) {
  const Scenario s = fat_tree_scenario({});
  int hosts = 0;
  for (const auto& n : s.nodes) hosts += n.kind == NodeKind::kHost;
  EXPECT_EQ(hosts, 16);
  EXPECT_EQ(s.flows.size(), 60u);
  int external = 0;
  std::set<std::string> internal_hosts;
  for (const auto& f : s.flows) {
    const bool ext = s.node(f.src).kind == NodeKind::kGateway;
    external += ext;
    if (!ext) {
      internal_hosts.insert(f.src);
      internal_hosts.insert(f.dst);
    }
    EXPECT_EQ(f.demand, 1.0);
  }
  EXPECT_EQ(external, 16);
  EXPECT_EQ(internal_hosts.size(), 16u);  // every host talks internally

  // Exactly two high-risk hosts, siblings under one edge switch.
  std::vector<std::string> risky;
  for (const auto& n : s.nodes) {
    if (s.risk.at(n.id, "web") > 1.0) risky.push_back(n.id);
  }
  ASSERT_EQ(risky.size(), 2u);
  auto edge_of = [&](const std::string& h) {
    for (const auto& e : s.edges) {
      if (e.u == h) return e.v;
      if (e.v == h) return e.u;
    }
    return std::string();
  };
  EXPECT_EQ(edge_of(risky[0]), edge_of(risky[1]));
}

TEST(FatTreeFixture, ExternalHostsAreHalfAndUseOneGateway) {
  const Scenario s = fat_tree_scenario({});
  std::map<std::string, std::set<std::string>> gw_of;
  for (const auto& f : s.flows) {
    if (s.node(f.src).kind == NodeKind::kGateway) gw_of[f.dst].insert(f.src);
  }
  EXPECT_LE(gw_of.size(), 8u);
  for (const auto& [h, gws] : gw_of) EXPECT_EQ(gws.size(), 1u) << h;
}

TEST(FatTreeFixture, PureFunctionOfSeed) {
  FatTreeScenarioSpec a;
  FatTreeScenarioSpec b;
  b.seed = 8;
  EXPECT_EQ(fat_tree_scenario(a), fat_tree_scenario(a));
  EXPECT_NE(fat_tree_scenario(a).flows, fat_tree_scenario(b).flows);
}

TEST(FatTreeFixture, ImpossibleRequestsThrow) {
  FatTreeScenarioSpec spec;
  spec.external = 17;  // only 8 permitted hosts x 2 types
  EXPECT_THROW(fat_tree_scenario(spec), ScenarioError);
  spec = {};
  spec.high_risk = 3;
  EXPECT_THROW(fat_tree_scenario(spec), ScenarioError);
}
