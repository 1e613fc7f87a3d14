#include "docsdn/coordinator/coordinator.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "docsdn/topology/graph.hpp"
#include "docsdn/topology/topology.hpp"

namespace docsdn {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

// Turns cut rules into equivalence classes (deduplicated by member set).
void to_classes(const std::vector<CutRule>& cuts, std::vector<EquivalenceClass>& classes,
                std::vector<SegregationRule>& rules) {
  std::map<std::set<std::string>, int> ids;
  auto class_of = [&](const std::set<std::string>& members) {
    auto [it, fresh] = ids.try_emplace(members, static_cast<int>(ids.size()));
    if (fresh) classes.push_back({it->second, members});
    return it->second;
  };
  for (const auto& c : cuts) rules.push_back({class_of(c.first), class_of(c.second)});
}

struct Evaluated {
  IterationRecord record;
  Snapshot snapshot;
};

Evaluated evaluate(const Scenario& s, const PathPool& pool, const opt::Backend& backend,
                   const RunOptions& opt, const std::vector<CutRule>& cuts) {
  const auto start = Clock::now();
  std::vector<EquivalenceClass> classes;
  std::vector<SegregationRule> rules;
  to_classes(cuts, classes, rules);

  Evaluated ev;
  const FunctionalModel fm = build_functional_model(s, pool, classes, rules);
  ev.snapshot.functional = solve_functional(s, pool, fm, backend, opt.limits);
  ev.snapshot.risks = compute_flow_risks(s, pool, ev.snapshot.functional, opt.risk);
  const SecurityModel sm = build_security_model(s, pool, ev.snapshot.functional, ev.snapshot.risks);
  ev.snapshot.security = solve_security(s, pool, ev.snapshot.functional, sm, backend, opt.limits);
  ev.snapshot.rules = cuts;

  auto& r = ev.record;
  const auto& f = ev.snapshot.functional;
  const auto& sec = ev.snapshot.security;
  r.func_obj = f.objective;
  r.func_obj_no_reward = f.objective_no_cut_reward;
  r.sec_obj = sec.objective;
  r.overall = r.func_obj_no_reward + r.sec_obj;
  r.blocked = sec.blocked_count();
  r.served = static_cast<int>(s.flows.size()) - r.blocked;
  for (std::size_t fi = 0; fi < s.flows.size(); ++fi) {
    if (!sec.blocked[fi]) r.network_risk += ev.snapshot.risks[fi];
  }
  r.nodes_explored = f.nodes_explored + sec.nodes_explored;
  r.seconds = seconds_since(start);
  return ev;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::vector<int> RunResult::incumbents() const {
  std::vector<int> out;
  for (const auto& r : history) {
    if (r.index == 0 || r.judgement == Judgement::kBeneficial) out.push_back(r.index);
  }
  return out;
}

RunResult run_framework(const Scenario& s, const opt::Backend& backend, const RunOptions& options) {
  const auto start = Clock::now();
  RunResult result;
  result.pool = build_pool(s);

  auto record = [&](Evaluated ev) {
    ev.record.index = static_cast<int>(result.history.size());
    result.history.push_back(ev.record);
    result.snapshots.push_back(std::move(ev.snapshot));
  };
  auto candidates = [&](int iteration, const std::set<CutRule>& proposed) {
    const Snapshot& snap = result.snapshots.at(iteration);
    return generate_candidates(s, result.pool, snap.functional, snap.security, snap.risks, proposed);
  };

  FeedbackState state;
  record(evaluate(s, result.pool, backend, options, {}));
  int incumbent = 0;
  Action action = step(state, std::nullopt, candidates(0, {}));

  while (action == Action::kTrial) {
    if (static_cast<int>(result.history.size()) >= options.max_iterations ||
        seconds_since(start) > options.wall_budget_s) {
      result.stopped_by_limit = true;
      break;
    }
    Evaluated ev = evaluate(s, result.pool, backend, options, state.active_rules());
    ev.record.accepted_rules = static_cast<int>(state.accepted.size());
    ev.record.trialed_cut = state.trial->rule.str();
    const auto& inc = result.history[incumbent];
    const Judgement j = judge_cut({inc.func_obj_no_reward, inc.sec_obj},
                                  {ev.record.func_obj_no_reward, ev.record.sec_obj});
    ev.record.judgement = j;
    record(std::move(ev));
    const int idx = static_cast<int>(result.history.size()) - 1;
    result.cut_log.push_back("cut " + std::to_string(idx) + " " + state.trial->rule.str() + " -> " +
                             to_string(j));
    std::vector<Cut> fresh;
    if (j == Judgement::kBeneficial) {
      ++result.beneficial;
      ++result.history[idx].accepted_rules;
      incumbent = idx;
      fresh = candidates(idx, state.queue.trialed());
    } else {
      ++result.harmful;
    }
    action = step(state, j, std::move(fresh));
  }

  // Best: least overall objective; near-ties go to the latest incumbent.
  double least = result.history[0].overall;
  for (const auto& r : result.history) least = std::min(least, r.overall);
  const double tie = 1e-9 * std::max(1.0, std::abs(least));
  result.best_iteration = -1;
  for (int idx : result.incumbents()) {
    if (result.history[idx].overall <= least + tie) result.best_iteration = idx;
  }
  if (result.best_iteration < 0) {
    for (const auto& r : result.history) {
      if (r.overall <= least + tie) {
        result.best_iteration = r.index;
        break;
      }
    }
  }
  result.proposed = state.queue.total_proposed();
  result.wall_time = seconds_since(start);
  return result;
}

std::string emit_sdn_fragments(const Scenario& s, const RunResult& result) {
  const Snapshot& best = result.best();
  const auto& pool = result.pool;
  struct Forward {
    std::string src, dst, type, next;
  };
  std::map<std::string, std::vector<Forward>> forwards;
  for (std::size_t fi = 0; fi < s.flows.size(); ++fi) {
    if (best.security.blocked[fi]) continue;
    const auto& f = s.flows[fi];
    const Path& p = pool.path(best.functional.active_path[fi]);
    for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
      if (s.node(p.nodes[i]).kind == NodeKind::kHost) continue;
      forwards[p.nodes[i]].push_back({f.src, f.dst, f.type, p.nodes[i + 1]});
    }
  }

  std::ostringstream os;
  for (const auto& n : s.nodes) {
    for (const auto& [node, type] : best.security.placement.firewalls) {
      if (node == n.id) os << "at " << n.id << ": match(type=" << type << ") -> drop\n";
    }
    if (best.security.placement.inspections.count(n.id)) os << "at " << n.id << ": inspect\n";
    auto it = forwards.find(n.id);
    if (it == forwards.end()) continue;
    auto& list = it->second;
    std::sort(list.begin(), list.end(), [](const Forward& a, const Forward& b) {
      return std::tie(a.dst, a.type, a.src) < std::tie(b.dst, b.type, b.src);
    });
    std::map<std::pair<std::string, std::string>, int> same_match;
    for (const auto& fw : list) ++same_match[{fw.dst, fw.type}];
    for (const auto& fw : list) {
      os << "at " << n.id << ": match(";
      // Several flows share (dst, type) here: qualify by source.
      if (same_match[{fw.dst, fw.type}] > 1) os << "src=" << fw.src << ", ";
      os << "dst=" << fw.dst << ", type=" << fw.type << ") -> fwd(" << fw.next << ")\n";
    }
  }
  return os.str();
}

std::string report_csv(const RunResult& result) {
  std::ostringstream os;
  os << "iteration,func_obj,func_obj_no_reward,sec_obj,overall,network_risk,served,blocked,"
        "nodes_explored,trialed_cut,judgement,accepted_rules,seconds\n";
  for (const auto& r : result.history) {
    os << r.index << ',' << fmt(r.func_obj) << ',' << fmt(r.func_obj_no_reward) << ','
       << fmt(r.sec_obj) << ',' << fmt(r.overall) << ',' << fmt(r.network_risk) << ',' << r.served
       << ',' << r.blocked << ',' << r.nodes_explored << ",\"" << r.trialed_cut << "\","
       << (r.judgement ? to_string(*r.judgement) : "") << ',' << r.accepted_rules << ','
       << fmt(r.seconds) << '\n';
  }
  return os.str();
}

std::string report_text(const Scenario& s, const RunResult& result) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%4s %12s %12s %12s %12s %12s %6s %7s %8s  %s\n", "iter",
                "func", "func_noreward", "security", "overall", "net_risk", "served", "blocked",
                "nodes", "cut");
  os << line;
  for (const auto& r : result.history) {
    std::string cut = r.trialed_cut;
    if (r.judgement) cut += std::string(" ") + to_string(*r.judgement);
    std::snprintf(line, sizeof line, "%4d %12.6g %12.6g %12.6g %12.6g %12.6g %6d %7d %8ld  %s\n",
                  r.index, r.func_obj, r.func_obj_no_reward, r.sec_obj, r.overall, r.network_risk,
                  r.served, r.blocked, r.nodes_explored, cut.c_str());
    os << line;
  }
  const auto& b = result.history[result.best_iteration];
  os << "\nbest iteration: " << result.best_iteration << "\n"
     << "flows served: " << b.served << " of " << s.flows.size() << "\n"
     << "flows blocked: " << b.blocked << "\n"
     << "network risk: " << fmt(b.network_risk) << "\n"
     << "cuts proposed: " << result.proposed << "\n"
     << "cuts beneficial: " << result.beneficial << "\n"
     << "cuts harmful: " << result.harmful << "\n"
     << "stopped by limit: " << (result.stopped_by_limit ? "yes" : "no") << "\n"
     << "wall time (s): " << fmt(result.wall_time) << "\n";
  os << "\naccepted rules:\n";
  for (const auto& r : result.best().rules) os << "  " << r.str() << "\n";
  os << "\ncut log:\n";
  for (const auto& l : result.cut_log) os << "  " << l << "\n";
  os << "\nbest configuration:\n"
     << functional_report(s, result.pool, result.best().functional)
     << security_report(s, result.best().security);
  return os.str();
}

std::string iteration_dot(const Scenario& s, const RunResult& result, int iteration) {
  const Snapshot& snap = result.snapshots.at(iteration);
  const Snapshot& first = result.snapshots.front();
  const Thresholds th = derive_thresholds(s, snap.risks);
  std::map<std::string, NodeStyle> styles;

  // Hosts whose traffic was blocked initially and is now entirely served.
  std::map<std::string, std::pair<bool, bool>> host_state;  // (blocked at 0, blocked now)
  for (std::size_t fi = 0; fi < s.flows.size(); ++fi) {
    for (const auto* id : {&s.flows[fi].src, &s.flows[fi].dst}) {
      if (s.node(*id).kind != NodeKind::kHost) continue;
      auto& st = host_state[*id];
      st.first = st.first || first.security.blocked[fi];
      st.second = st.second || snap.security.blocked[fi];
    }
  }
  for (const auto& [h, st] : host_state) {
    if (st.first && !st.second) styles[h].color = "green";
  }
  for (const auto& h : th.high_risk_hosts) styles[h].color = "red";
  for (const auto& [n, t] : snap.security.placement.firewalls) {
    styles[n].shape = "box";
    styles[n].label += (styles[n].label.empty() ? "fw:" : ",") + t;
  }
  for (const auto& n : snap.security.placement.inspections) {
    styles[n].label += std::string(styles[n].label.empty() ? "" : " ") + "pi";
  }
  return export_dot(s.nodes, s.edges, styles);
}

}  // namespace docsdn
