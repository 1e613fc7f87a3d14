#include <gtest/gtest.h>

#include <regex>
#include <sstream>

#include "docsdn/coordinator/coordinator.hpp"
#include "docsdn/fixtures/fixtures.hpp"
#include "docsdn/optimkit/exact.hpp"

using namespace docsdn;

namespace {

const opt::ExactBackend kExact;

// Switches and gateways on the active path of each flow touching `host`.
std::set<std::string> devices_of(const Scenario& s, const RunResult& r, int it, const std::string& host) {
  std::set<std::string> out;
  const auto& snap = r.snapshots.at(it);
  for (std::size_t f = 0; f < s.flows.size(); ++f) {
    const Path& p = r.pool.path(snap.functional.active_path[f]);
    if (!p.contains(host)) continue;
    for (const auto& n : p.nodes) {
      if (s.node(n).kind != NodeKind::kHost) out.insert(n);
    }
  }
  return out;
}

const RunResult& toy_run() {
  static const RunResult r = run_framework(toy_scenario(), kExact);
  return r;
}

}  // namespace

TEST(Coordinator, ToyIsolatesTheRiskyHost) {
  const Scenario s = toy_scenario();
  const RunResult& r = toy_run();
  ASSERT_GE(r.history.size(), 2u);
  const int b = r.best_iteration;
  const auto& best = r.best();

  // H1 shares no switch with any other host.
  const auto h1 = devices_of(s, r, b, "H1");
  for (const char* h : {"H2", "H3", "H4"}) {
    for (const auto& n : devices_of(s, r, b, h)) {
      if (s.node(n).kind == NodeKind::kSwitch) EXPECT_FALSE(h1.count(n)) << h << " meets H1 at " << n;
    }
  }
  ASSERT_EQ(best.security.placement.firewalls.size(), 1u);
  const std::string fw = best.security.placement.firewalls.begin()->first;
  EXPECT_TRUE(h1.count(fw));
  for (std::size_t f = 0; f < s.flows.size(); ++f) {
    const bool touches = s.flows[f].src == "H1" || s.flows[f].dst == "H1";
    EXPECT_EQ(static_cast<bool>(best.security.blocked[f]), touches) << f;
  }
  EXPECT_EQ(r.history[b].served, 3);
  EXPECT_LT(r.wall_time, 10.0);
}

TEST(Coordinator, HistoryBookkeeping) {
  const RunResult& r = toy_run();
  ASSERT_EQ(r.history.size(), r.snapshots.size());
  EXPECT_FALSE(r.history[0].judgement);
  EXPECT_TRUE(r.history[0].trialed_cut.empty());
  EXPECT_EQ(r.beneficial + r.harmful, static_cast<int>(r.history.size()) - 1);
  EXPECT_EQ(static_cast<int>(r.cut_log.size()), r.beneficial + r.harmful);
  EXPECT_GE(r.proposed, r.cut_log.size());
  EXPECT_LE(r.history[r.best_iteration].overall, r.history[0].overall + 1e-9);
  for (const auto& h : r.history) {
    EXPECT_NEAR(h.overall, h.func_obj_no_reward + h.sec_obj, 1e-9);
    EXPECT_EQ(h.served + h.blocked, 4);
  }
  const auto inc = r.incumbents();
  ASSERT_FALSE(inc.empty());
  EXPECT_EQ(inc.front(), 0);
  EXPECT_TRUE(std::find(inc.begin(), inc.end(), r.best_iteration) != inc.end());
}

TEST(Coordinator, Deterministic) {
  const RunResult a = run_framework(toy_scenario(), kExact);
  const RunResult& b = toy_run();
  ASSERT_EQ(a.history.size(), b.history.size());
  EXPECT_EQ(a.cut_log, b.cut_log);
  EXPECT_EQ(emit_sdn_fragments(toy_scenario(), a), emit_sdn_fragments(toy_scenario(), b));
}

TEST(Coordinator, RecoveryServesEverything) {
  const Scenario s = toy_scenario({.h1_risk = 1.0});
  const RunResult r = run_framework(s, kExact);
  EXPECT_EQ(r.history[r.best_iteration].blocked, 0);
  EXPECT_TRUE(r.best().security.placement.firewalls.empty());
  EXPECT_LT(r.wall_time, 10.0);
}

TEST(Coordinator, IterationLimitStops) {
  RunOptions opt;
  opt.max_iterations = 1;
  const RunResult r = run_framework(toy_scenario(), kExact, opt);
  EXPECT_EQ(r.history.size(), 1u);
  EXPECT_TRUE(r.stopped_by_limit);
}

TEST(Coordinator, SdnRulesFollowTheBestConfiguration) {
  const Scenario s = toy_scenario();
  const RunResult& r = toy_run();
  const auto& best = r.best();
  const std::string text = emit_sdn_fragments(s, r);
  const std::regex drop(R"(^at (\w+): match\(type=([\w*]+)\) -> drop$)");
  const std::regex fwd(R"(^at (\w+): match\((?:src=(\w+), )?dst=(\w+), type=(\w+)\) -> fwd\((\w+)\)$)");
  std::istringstream in(text);
  std::string line;
  std::map<std::string, bool> seen_forward;
  int drops = 0, forwards = 0;
  while (std::getline(in, line)) {
    std::smatch m;
    if (std::regex_match(line, m, drop)) {
      ++drops;
      EXPECT_TRUE(best.security.placement.firewalls.count({m[1], m[2]})) << line;
      EXPECT_FALSE(seen_forward[m[1]]) << "drop after forward at " << m[1];
    } else if (std::regex_match(line, m, fwd)) {
      ++forwards;
      seen_forward[m[1]] = true;
      // The hop lies on exactly one served flow's active path, as a consecutive pair.
      int hits = 0;
      for (std::size_t f = 0; f < s.flows.size(); ++f) {
        const auto& fl = s.flows[f];
        if (best.security.blocked[f] || fl.dst != m[3] || fl.type != m[4]) continue;
        if (m[2].matched && fl.src != m[2]) continue;
        const auto& nodes = r.pool.path(best.functional.active_path[f]).nodes;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) hits += nodes[i] == m[1] && nodes[i + 1] == m[5];
      }
      EXPECT_EQ(hits, 1) << line;
    } else if (line.find(": inspect") == std::string::npos) {
      ADD_FAILURE() << "unexpected rule: " << line;
    }
  }
  EXPECT_EQ(drops, static_cast<int>(best.security.placement.firewalls.size()));
  // One forward per non-host hop of every served flow.
  int hops = 0;
  for (std::size_t f = 0; f < s.flows.size(); ++f) {
    if (!best.security.blocked[f]) hops += r.pool.path(best.functional.active_path[f]).len() - 1;
  }
  EXPECT_EQ(forwards, hops);
}

TEST(Coordinator, Reports) {
  const Scenario s = toy_scenario();
  const RunResult& r = toy_run();
  const std::string csv = report_csv(r);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(r.history.size()) + 1);
  EXPECT_EQ(csv.rfind("iteration,func_obj,", 0), 0u);
  const std::string txt = report_text(s, r);
  EXPECT_NE(txt.find("best iteration: " + std::to_string(r.best_iteration)), std::string::npos);
  EXPECT_NE(txt.find("flows served: 3 of 4"), std::string::npos);
  const std::string dot = iteration_dot(s, r, r.best_iteration);
  EXPECT_NE(dot.find("H1 [color=red"), std::string::npos);
  EXPECT_NE(dot.find("shape=box"), std::string::npos);
}
