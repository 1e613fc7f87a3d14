#include "docsdn/functional/functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "docsdn/optimkit/gadgets.hpp"
#include "docsdn/topology/graph.hpp"

namespace docsdn {
namespace {

using opt::LinExpr;
using opt::Relation;
using opt::Var;

// Lower bound on the flow of an active path.
constexpr double kActiveFlowLb = 1.0;

double bottleneck(const Graph& g, const Path& p) {
  double cap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
    const auto e = g.edge_between(g.index(p.nodes[i]), g.index(p.nodes[i + 1]));
    cap = std::min(cap, g.edge(*e).capacity);
  }
  return cap;
}

std::string flow_label(const FlowSpec& f) { return f.src + "->" + f.dst + " " + f.type; }

std::string diagnose_infeasible(const Scenario& s, const PathPool& pool, const Graph& g) {
  std::ostringstream os;
  os << "functional layer infeasible:";
  bool found = false;
  for (const auto& f : s.flows) {
    double best = 0.0;
    for (int pid : pool.for_pair(f.src, f.dst)) best = std::max(best, bottleneck(g, pool.path(pid)));
    const double need = std::max(f.demand, kActiveFlowLb);
    if (best < need) {
      os << "\n  flow " << flow_label(f) << ": demand " << need
         << " exceeds the bottleneck capacity " << best << " of every candidate path";
      found = true;
    }
  }
  for (int e = 0; e < g.num_edges(); ++e) {
    double forced = 0.0;
    for (const auto& f : s.flows) {
      const auto& cands = pool.for_pair(f.src, f.dst);
      const auto& on_edge = pool.through_edge(e);
      const bool all_use = !cands.empty() && std::all_of(cands.begin(), cands.end(), [&](int pid) {
        return std::find(on_edge.begin(), on_edge.end(), pid) != on_edge.end();
      });
      if (all_use) forced += std::max(f.demand, kActiveFlowLb);
    }
    if (forced > g.edge(e).capacity + opt::kFeasTol) {
      os << "\n  edge " << g.edge(e).u << "-" << g.edge(e).v << ": unavoidable demand " << forced
         << " exceeds capacity " << g.edge(e).capacity;
      found = true;
    }
  }
  if (!found) os << "\n  combined demand exceeds the capacity of shared links";
  return os.str();
}

// Paths of the pool touching any member of the class.
std::set<int> paths_touching(const PathPool& pool, const EquivalenceClass& c) {
  std::set<int> out;
  for (const auto& m : c.members) {
    for (int pid : pool.through_node(m)) out.insert(pid);
  }
  return out;
}

}  // namespace

FunctionalModel build_functional_model(const Scenario& s, const PathPool& pool,
                                       const std::vector<EquivalenceClass>& classes,
                                       const std::vector<SegregationRule>& rules) {
  const Graph g(s);
  FunctionalModel fm;
  fm.classes = classes;
  fm.rules = rules;
  std::map<int, const EquivalenceClass*> class_by_id;
  for (const auto& c : classes) {
    if (c.members.empty()) throw ScenarioError("equivalence class " + std::to_string(c.id) + " is empty");
    class_by_id[c.id] = &c;
  }
  for (const auto& r : rules) {
    for (int id : {r.first, r.second}) {
      if (!class_by_id.count(id)) {
        throw ScenarioError("segregation rule references unknown class " + std::to_string(id));
      }
    }
  }

  auto& m = fm.model;
  const auto& [a0, a1, a2] = s.weights.alpha;
  LinExpr objective;

  // Per (flow, candidate path): activity indicator, demand and single choice.
  std::map<int, std::vector<std::pair<int, FunctionalModel::Candidate>>> by_path;
  fm.candidates.resize(s.flows.size());
  for (std::size_t fi = 0; fi < s.flows.size(); ++fi) {
    const auto& f = s.flows[fi];
    const auto& pids = pool.for_pair(f.src, f.dst);
    if (pids.empty()) throw ScenarioError("no candidate path for flow " + flow_label(f));
    LinExpr pick, supply;
    for (int pid : pids) {
      const Path& p = pool.path(pid);
      const std::string tag = "f" + std::to_string(fi) + "_p" + std::to_string(pid);
      const double ub = bottleneck(g, p);
      const Var act = m.add_binary("active_" + tag);
      const Var amt = m.add_continuous(0.0, ub, "flow_" + tag);
      if (ub >= kActiveFlowLb) {
        opt::add_indicator_lb(m, act, amt, kActiveFlowLb, ub);
      } else {
        // The path cannot carry the mandatory unit of flow.
        m.add_constraint(LinExpr(act), Relation::kEq, 0.0, "unusable_" + tag);
        opt::add_indicator_lb(m, act, amt, 0.0, ub);
      }
      pick += LinExpr(act);
      supply += LinExpr(amt);
      objective += LinExpr(amt) * (a0 * p.len());
      fm.candidates[fi].push_back({pid, act, amt});
      by_path[pid].emplace_back(static_cast<int>(fi), fm.candidates[fi].back());
    }
    m.add_constraint(pick, Relation::kEq, 1.0, "one_path_f" + std::to_string(fi));
    m.add_constraint(supply, Relation::kGe, f.demand, "demand_f" + std::to_string(fi));
  }

  // Capacity per edge.
  for (int e = 0; e < g.num_edges(); ++e) {
    LinExpr used;
    bool any = false;
    for (int pid : pool.through_edge(e)) {
      auto it = by_path.find(pid);
      if (it == by_path.end()) continue;
      for (const auto& [fi, c] : it->second) {
        used += LinExpr(c.flow);
        any = true;
      }
    }
    if (any) m.add_constraint(used, Relation::kLe, g.edge(e).capacity, "cap_e" + std::to_string(e));
  }

  // Node loads and the quadratic balancing term.
  for (const auto& n : s.nodes) {
    LinExpr sum;
    std::set<int> flows_here;
    for (int pid : pool.through_node(n.id)) {
      auto it = by_path.find(pid);
      if (it == by_path.end()) continue;
      for (const auto& [fi, c] : it->second) {
        sum += LinExpr(c.flow);
        flows_here.insert(fi);
      }
    }
    if (flows_here.empty()) continue;
    double range = 0.0;
    for (int fi : flows_here) range += std::max(s.flows[fi].demand, kActiveFlowLb);
    const Var load = m.add_continuous(0.0, std::numeric_limits<double>::infinity(), "load_" + n.id);
    m.add_constraint(sum - LinExpr(load), Relation::kEq, 0.0, "loaddef_" + n.id);
    fm.load[n.id] = load;
    if (a2 > 0.0) m.add_quadratic(a2, load, range);
  }

  if (!rules.empty()) {
    // active_{p,*}: one indicator per path regardless of traffic type.
    std::map<int, Var> any_active;
    for (const auto& [pid, list] : by_path) {
      if (list.size() == 1) {
        any_active[pid] = list.front().second.active;
        continue;
      }
      const Var y = m.add_binary("active_any_p" + std::to_string(pid));
      std::vector<Var> xs;
      for (const auto& [fi, c] : list) xs.push_back(c.active);
      opt::add_or(m, y, xs);
      any_active[pid] = y;
    }

    // Class membership for every class used by a rule.
    std::set<int> used_classes;
    for (const auto& r : rules) used_classes.insert({r.first, r.second});
    for (int cid : used_classes) {
      const std::set<int> touching = paths_touching(pool, *class_by_id[cid]);
      for (const auto& n : s.nodes) {
        std::vector<Var> xs;
        for (int pid : pool.through_node(n.id)) {
          if (touching.count(pid) && any_active.count(pid)) xs.push_back(any_active[pid]);
        }
        if (xs.empty()) continue;
        const Var y = m.add_binary("equiv_c" + std::to_string(cid) + "_" + n.id);
        opt::add_or(m, y, xs);
        fm.equiv[{cid, n.id}] = y;
      }
    }

    // Shared nodes and the segregation reward alpha1 * sum(share - 1).
    for (std::size_t ri = 0; ri < rules.size(); ++ri) {
      for (const auto& n : s.nodes) {
        auto e1 = fm.equiv.find({rules[ri].first, n.id});
        auto e2 = fm.equiv.find({rules[ri].second, n.id});
        if (e1 == fm.equiv.end() || e2 == fm.equiv.end()) continue;
        const Var y = m.add_binary("share_r" + std::to_string(ri) + "_" + n.id);
        const std::vector<Var> xs{e1->second, e2->second};
        opt::add_and(m, y, xs);
        fm.share.push_back({static_cast<int>(ri), n.id, y});
        objective += LinExpr(y) * a1;
      }
    }
    fm.reward_constant = -a1 * static_cast<double>(rules.size() * s.nodes.size());
    objective.add_constant(fm.reward_constant);
  }

  m.add_objective(objective);
  return fm;
}

FunctionalSolution solve_functional(const Scenario& s, const PathPool& pool,
                                    const FunctionalModel& fm, const opt::Backend& backend,
                                    const opt::Limits& limits) {
  const opt::Solution raw = backend.solve(fm.model, limits);
  if (raw.status == opt::SolveStatus::kInfeasible) {
    throw opt::InfeasibleError(diagnose_infeasible(s, pool, Graph(s)));
  }
  if (!raw.has_values()) {
    throw opt::OptError("functional layer: solver stopped at a limit without a feasible point");
  }

  FunctionalSolution sol;
  sol.nodes_explored = raw.nodes_explored;
  for (const auto& cands : fm.candidates) {
    int chosen = -1;
    double amount = 0.0;
    for (const auto& c : cands) {
      if (raw.is_one(c.active)) {
        chosen = c.path;
        amount = raw.value(c.flow);
      }
    }
    sol.active_path.push_back(chosen);
    sol.amount.push_back(amount);
  }
  for (const auto& [n, v] : fm.load) sol.load[n] = raw.value(v);
  for (const auto& [key, v] : fm.equiv) sol.equiv[key] = raw.is_one(v) ? 1 : 0;
  for (const auto& sh : fm.share) {
    const int v = raw.is_one(sh.var) ? 1 : 0;
    sol.share[{sh.rule, sh.node}] = v;
    sol.share_count += v;
  }
  sol.objective = raw.objective;
  sol.objective_no_cut_reward = functional_cost(s, pool, sol.active_path, sol.amount);

  auto problems = check_functional(s, pool, sol);
  const auto shares = recompute_share(s, pool, sol, fm.classes, fm.rules);
  for (const auto& [key, v] : shares) {
    auto it = sol.share.find(key);
    const int got = it == sol.share.end() ? 0 : it->second;
    if (got != v) problems.push_back("share mismatch for rule " + std::to_string(key.first) + " at " + key.second);
  }
  if (!problems.empty()) {
    std::string msg = "functional solution failed validation:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw opt::OptError(msg);
  }
  return sol;
}

std::vector<std::string> check_functional(const Scenario& s, const PathPool& pool,
                                          const FunctionalSolution& sol, double eps) {
  std::vector<std::string> out;
  const Graph g(s);
  if (sol.active_path.size() != s.flows.size() || sol.amount.size() != s.flows.size()) {
    return {"solution does not cover every flow"};
  }
  std::vector<double> edge_use(g.num_edges(), 0.0);
  std::map<std::string, double> load;
  for (std::size_t fi = 0; fi < s.flows.size(); ++fi) {
    const auto& f = s.flows[fi];
    const int pid = sol.active_path[fi];
    const auto& cands = pool.for_pair(f.src, f.dst);
    if (std::find(cands.begin(), cands.end(), pid) == cands.end()) {
      out.push_back("flow " + flow_label(f) + ": no single active candidate path");
      continue;
    }
    const double amt = sol.amount[fi];
    const Path& p = pool.path(pid);
    if (amt < f.demand - eps) out.push_back("flow " + flow_label(f) + ": demand not met");
    if (amt < kActiveFlowLb - eps) out.push_back("flow " + flow_label(f) + ": active path below unit flow");
    if (s.weights.alpha[0] > 0.0 &&
        std::abs(amt - std::max(f.demand, kActiveFlowLb)) > eps * std::max(1.0, f.demand)) {
      out.push_back("flow " + flow_label(f) + ": flow is not tight at the demand");
    }
    for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
      edge_use[*g.edge_between(g.index(p.nodes[i]), g.index(p.nodes[i + 1]))] += amt;
    }
    for (const auto& n : p.nodes) load[n] += amt;
  }
  for (int e = 0; e < g.num_edges(); ++e) {
    if (edge_use[e] > g.edge(e).capacity + eps) {
      out.push_back("edge " + g.edge(e).u + "-" + g.edge(e).v + ": capacity exceeded");
    }
  }
  for (const auto& [n, v] : sol.load) {
    const double want = load.count(n) ? load[n] : 0.0;
    if (std::abs(v - want) > eps * std::max(1.0, want)) out.push_back("node " + n + ": load mismatch");
  }
  for (const auto& [n, v] : load) {
    if (!sol.load.count(n)) out.push_back("node " + n + ": load missing");
  }
  return out;
}

std::map<std::pair<int, std::string>, int> recompute_share(
    const Scenario& s, const PathPool& pool, const FunctionalSolution& sol,
    const std::vector<EquivalenceClass>& classes, const std::vector<SegregationRule>& rules) {
  std::map<int, std::set<std::string>> members;
  for (const auto& c : classes) members[c.id] = c.members;
  // Nodes on active paths touching each class.
  auto covered = [&](int cid) {
    std::set<std::string> nodes;
    for (int pid : sol.active_path) {
      if (pid < 0) continue;
      const Path& p = pool.path(pid);
      const bool touches = std::any_of(p.nodes.begin(), p.nodes.end(),
                                       [&](const std::string& n) { return members[cid].count(n) > 0; });
      if (touches) nodes.insert(p.nodes.begin(), p.nodes.end());
    }
    return nodes;
  };
  std::map<std::pair<int, std::string>, int> out;
  for (std::size_t ri = 0; ri < rules.size(); ++ri) {
    const auto a = covered(rules[ri].first);
    const auto b = covered(rules[ri].second);
    for (const auto& n : s.nodes) out[{static_cast<int>(ri), n.id}] = a.count(n.id) && b.count(n.id);
  }
  return out;
}

double functional_cost(const Scenario& s, const PathPool& pool, const std::vector<int>& active,
                       const std::vector<double>& amount) {
  std::map<std::string, double> load;
  double length_term = 0.0;
  for (std::size_t fi = 0; fi < active.size(); ++fi) {
    if (active[fi] < 0) continue;
    const Path& p = pool.path(active[fi]);
    length_term += p.len() * amount[fi];
    for (const auto& n : p.nodes) load[n] += amount[fi];
  }
  double balance = 0.0;
  for (const auto& [n, v] : load) balance += v * v;
  return s.weights.alpha[0] * length_term + s.weights.alpha[2] * balance;
}

std::string functional_report(const Scenario& s, const PathPool& pool,
                              const FunctionalSolution& sol) {
  std::ostringstream os;
  for (std::size_t fi = 0; fi < s.flows.size(); ++fi) {
    const auto& f = s.flows[fi];
    os << "flow " << f.src << ' ' << f.dst << ' ' << f.type << " path="
       << (sol.active_path[fi] >= 0 ? pool.path(sol.active_path[fi]).str() : "-")
       << " amount=" << sol.amount[fi] << '\n';
  }
  for (const auto& [n, v] : sol.load) os << "load " << n << ' ' << v << '\n';
  return os.str();
}

}  // namespace docsdn
