#include <gtest/gtest.h>

#include <random>

#include "docsdn/fixtures/fixtures.hpp"
#include "docsdn/functional/functional.hpp"
#include "docsdn/kpaths/kpaths.hpp"
#include "docsdn/optimkit/exact.hpp"

using namespace docsdn;

namespace {

const opt::ExactBackend kExact;

// alpha0 * sum len * D + alpha2 * sum load^2 for a routing given as one pool
// path per flow, computed without touching the library's model code.
double oracle_cost(const Scenario& s, const PathPool& pool, const std::vector<int>& choice) {
  std::map<std::string, double> load;
  double len = 0.0;
  for (std::size_t f = 0; f < s.flows.size(); ++f) {
    const Path& p = pool.path(choice[f]);
    const double amount = std::max(1.0, s.flows[f].demand);
    len += p.len() * amount;
    for (const auto& n : p.nodes) load[n] += amount;
  }
  double sq = 0.0;
  for (const auto& [n, l] : load) sq += l * l;
  return s.weights.alpha[0] * len + s.weights.alpha[2] * sq;
}

std::set<std::pair<int, std::string>> shared(const std::map<std::pair<int, std::string>, int>& m) {
  std::set<std::pair<int, std::string>> out;
  for (const auto& [k, v] : m) {
    if (v) out.insert(k);
  }
  return out;
}

std::vector<EquivalenceClass> host_classes(const Scenario& s) {
  std::vector<EquivalenceClass> out;
  for (const auto& n : s.nodes) {
    if (n.kind == NodeKind::kHost) out.push_back({static_cast<int>(out.size()), {n.id}});
  }
  return out;
}

}  // namespace

TEST(Functional, ToySplitMatchesEnumeration) {
  for (bool inbound : {false, true}) {
    Scenario s = toy_scenario();
    if (inbound) {
      for (auto& f : s.flows) std::swap(f.src, f.dst);
    }
    const PathPool pool = build_pool(s);
    const auto fm = build_functional_model(s, pool, {}, {});
    const auto sol = solve_functional(s, pool, fm, kExact);

    double best = 1e300;
    std::vector<int> choice(4);
    for (int mask = 0; mask < 16; ++mask) {
      for (int f = 0; f < 4; ++f) {
        const auto& ids = pool.for_pair(s.flows[f].src, s.flows[f].dst);
        choice[f] = ids[(mask >> f) & 1];
      }
      best = std::min(best, oracle_cost(s, pool, choice));
    }
    EXPECT_NEAR(sol.objective, best, 1e-6);
    EXPECT_NEAR(sol.objective_no_cut_reward, best, 1e-6);
    EXPECT_NEAR(oracle_cost(s, pool, sol.active_path), best, 1e-6);
    EXPECT_NEAR(sol.load.at("S1"), 2.0, 1e-6);
    EXPECT_NEAR(sol.load.at("S2"), 2.0, 1e-6);
    EXPECT_TRUE(check_functional(s, pool, sol).empty());
  }
}

TEST(Functional, SingleFlowModelShape) {
  Scenario s = toy_scenario();
  s.flows = {{"G1", "H1", "web", 1.0}};
  const PathPool pool = build_pool(s);
  const auto fm = build_functional_model(s, pool, {}, {});
  ASSERT_EQ(fm.candidates.size(), 1u);
  EXPECT_EQ(fm.candidates[0].size(), pool.for_pair("G1", "H1").size());
  EXPECT_GE(fm.candidates[0].size(), 2u);
  int binaries = 0;
  for (const auto& v : fm.model.vars()) binaries += v.kind == opt::VarKind::kBinary;
  EXPECT_EQ(binaries, 2);
  const auto a = solve_functional(s, pool, fm, kExact);
  const auto b = solve_functional(s, pool, fm, kExact);
  EXPECT_EQ(a.active_path, b.active_path);  // deterministic pick
  EXPECT_EQ(pool.path(a.active_path[0]).len(), 2);
}

TEST(Functional, NoFlows) {
  Scenario s = toy_scenario();
  s.flows.clear();
  const PathPool pool = build_pool(s);
  const auto fm = build_functional_model(s, pool, {}, {});
  const auto sol = solve_functional(s, pool, fm, kExact);
  EXPECT_NEAR(sol.objective, 0.0, 1e-9);
}

TEST(Functional, DemandBeyondCapacityIsInfeasible) {
  Scenario s = toy_scenario({.capacity = 1.0});
  for (auto& f : s.flows) f.demand = 10.0;
  const PathPool pool = build_pool(s);
  const auto fm = build_functional_model(s, pool, {}, {});
  EXPECT_THROW(solve_functional(s, pool, fm, kExact), opt::InfeasibleError);
}

TEST(Functional, FlowTightAtOptimum) {
  Scenario s = toy_scenario();
  s.flows[0].demand = 2.5;
  s.flows[1].demand = 0.25;  // the unit lower bound on active paths wins here
  const PathPool pool = build_pool(s);
  const auto fm = build_functional_model(s, pool, {}, {});
  const auto sol = solve_functional(s, pool, fm, kExact);
  EXPECT_NEAR(sol.amount[0], 2.5, 1e-6);
  EXPECT_NEAR(sol.amount[1], 1.0, 1e-6);
  EXPECT_NEAR(sol.amount[2], 1.0, 1e-6);
}

TEST(Functional, RuleRewardBookkeeping) {
  const Scenario s = toy_scenario();
  const PathPool pool = build_pool(s);
  const auto classes = host_classes(s);
  const std::vector<SegregationRule> rules{{0, 1}, {0, 2}};
  const auto fm = build_functional_model(s, pool, classes, rules);
  const auto sol = solve_functional(s, pool, fm, kExact);
  EXPECT_EQ(shared(sol.share), shared(recompute_share(s, pool, sol, classes, rules)));
  EXPECT_NEAR(sol.objective,
              sol.objective_no_cut_reward + s.weights.alpha[1] * sol.share_count + fm.reward_constant,
              1e-6);
  EXPECT_NEAR(sol.objective_no_cut_reward,
              functional_cost(s, pool, sol.active_path, sol.amount), 1e-6);
  // H1 must end up away from H2 and H3 on the switch level.
  auto via = [&](int f) { return pool.path(sol.active_path[f]).nodes[1]; };
  EXPECT_NE(via(0), via(1));
  EXPECT_NE(via(0), via(2));
}

TEST(Functional, UnknownClassRejected) {
  const Scenario s = toy_scenario();
  const PathPool pool = build_pool(s);
  EXPECT_ANY_THROW(build_functional_model(s, pool, host_classes(s), {{0, 9}}));
}

TEST(Functional, RulesNeverLowerCostWithoutReward) {
  std::mt19937 rng(5);
  const Scenario s = toy_scenario();
  const PathPool pool = build_pool(s);
  const auto classes = host_classes(s);
  const auto base = solve_functional(s, pool, build_functional_model(s, pool, {}, {}), kExact);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<SegregationRule> rules;
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) {
        if (rng() % 3 == 0) rules.push_back({a, b});
      }
    }
    const auto fm = build_functional_model(s, pool, classes, rules);
    const auto sol = solve_functional(s, pool, fm, kExact);
    EXPECT_GE(sol.objective_no_cut_reward, base.objective_no_cut_reward - 1e-6);
    EXPECT_EQ(shared(sol.share), shared(recompute_share(s, pool, sol, classes, rules)));
    EXPECT_TRUE(check_functional(s, pool, sol).empty());
  }
}

TEST(Functional, ReportFormat) {
  const Scenario s = toy_scenario();
  const PathPool pool = build_pool(s);
  const auto sol = solve_functional(s, pool, build_functional_model(s, pool, {}, {}), kExact);
  const std::string r = functional_report(s, pool, sol);
  EXPECT_NE(r.find("flow H1 G1 web path=H1-S"), std::string::npos);
  EXPECT_NE(r.find("load S1 2"), std::string::npos);
}

TEST(Functional, CheckerCatchesBrokenSolutions) {
  const Scenario s = toy_scenario({.capacity = 2.0});
  const PathPool pool = build_pool(s);
  auto sol = solve_functional(s, pool, build_functional_model(s, pool, {}, {}), kExact);
  auto bad = sol;
  bad.amount[0] = 0.5;  // below demand
  EXPECT_FALSE(check_functional(s, pool, bad).empty());
  bad = sol;
  // Route everything over the same switch: that G1 link carries 4 > 2.
  for (std::size_t f = 0; f < s.flows.size(); ++f) {
    bad.active_path[f] = pool.for_pair(s.flows[f].src, s.flows[f].dst)[0];
  }
  EXPECT_FALSE(check_functional(s, pool, bad).empty());
}

TEST(Functional, FatTreeModelSize) {
  const Scenario s = fat_tree_scenario({});
  const PathPool pool = build_pool(s);
  const auto fm = build_functional_model(s, pool, {}, {});
  std::size_t expected = 0;
  for (const auto& f : s.flows) expected += pool.for_pair(f.src, f.dst).size();
  std::size_t actives = 0;
  for (const auto& c : fm.candidates) actives += c.size();
  EXPECT_EQ(actives, expected);
}
