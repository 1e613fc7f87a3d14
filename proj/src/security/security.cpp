#include "docsdn/security/security.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "docsdn/optimkit/gadgets.hpp"

namespace docsdn {
namespace {

using opt::LinExpr;
using opt::Relation;
using opt::Var;

constexpr double kPiFactor = 0.1;

double penalty_of(double scale, double risk) { return risk > 0.0 ? scale / risk : scale; }

double memory_used(const Scenario& s, const Placement& pl, const std::string& node) {
  double used = 0.0;
  for (const auto& [n, t] : pl.firewalls) {
    if (n == node) used += s.costs.firewall_cost(t, s.traffic_types);
  }
  if (pl.inspections.count(node)) used += s.costs.pi_cost;
  return used;
}

}  // namespace

int SecuritySolution::blocked_count() const {
  return static_cast<int>(std::count(blocked.begin(), blocked.end(), 1));
}

bool can_defend(const Scenario& s, const Node& n) {
  return n.kind != NodeKind::kHost || s.defend_hosts;
}

double default_penalty_scale(const std::vector<double>& risks) {
  double m = 0.0;
  for (double r : risks) m = std::max(m, r);
  return m > 0.0 ? m : 1.0;
}

SecurityModel build_security_model(const Scenario& s, const PathPool& pool,
                                   const FunctionalSolution& fsol, const std::vector<double>& risks,
                                   std::optional<double> penalty_scale) {
  if (risks.size() != s.flows.size()) throw ScenarioError("missing risk value for an active path");
  SecurityModel sm;
  sm.risks = risks;
  sm.penalty_scale = penalty_scale.value_or(s.costs.penalty_scale.value_or(default_penalty_scale(risks)));
  auto& m = sm.model;
  const auto& [b0, b1, b2, b3] = s.weights.beta;
  LinExpr objective;

  // Types carried through each defendable node by the active routing.
  std::map<std::string, std::set<std::string>> types_at;
  for (std::size_t fi = 0; fi < s.flows.size(); ++fi) {
    for (const auto& n : pool.path(fsol.active_path[fi]).nodes) {
      if (can_defend(s, s.node(n))) types_at[n].insert(s.flows[fi].type);
    }
  }

  // Firewall indicators and memory per node.
  std::map<std::pair<std::string, std::string>, Var> fw_or;
  for (const auto& [n, types] : types_at) {
    LinExpr mem;
    const Var all = m.add_binary("fw_" + n + "_any");
    sm.fw[{n, std::string(kAnyType)}] = all;
    mem += LinExpr(all) * s.costs.firewall_cost(std::string(kAnyType), s.traffic_types);
    objective += LinExpr(all) * (b0 * s.costs.fw_comp);
    for (const auto& t : types) {
      const Var x = m.add_binary("fw_" + n + "_" + t);
      sm.fw[{n, t}] = x;
      mem += LinExpr(x) * s.costs.firewall_cost(t, s.traffic_types);
      objective += LinExpr(x) * (b0 * s.costs.fw_comp);
      const Var y = m.add_binary("fwor_" + n + "_" + t);
      const std::vector<Var> xs{x, all};
      opt::add_or(m, y, xs);
      fw_or[{n, t}] = y;
    }
    const Var p = m.add_binary("pi_" + n);
    sm.pi[n] = p;
    mem += LinExpr(p) * s.costs.pi_cost;
    const double load = fsol.load.count(n) ? fsol.load.at(n) : 0.0;
    objective += LinExpr(p) * (b0 * s.costs.pi_comp + b1 * load);
    m.add_constraint(mem, Relation::kLe, s.node(n).mem, "mem_" + n);
  }

  // Blocking and risk factor per flow on its active path.
  sm.fwop.resize(s.flows.size());
  sm.rf.resize(s.flows.size());
  for (std::size_t fi = 0; fi < s.flows.size(); ++fi) {
    const auto& f = s.flows[fi];
    const Path& p = pool.path(fsol.active_path[fi]);
    const std::string tag = "f" + std::to_string(fi);
    std::vector<Var> ors;
    std::vector<std::pair<double, Var>> reductions;  // 1 - multiplier
    for (const auto& n : p.nodes) {
      auto it = fw_or.find({n, f.type});
      if (it == fw_or.end()) continue;
      const double w = std::pow(0.5, p.rank(n));
      ors.push_back(it->second);
      reductions.emplace_back(w, it->second);
      reductions.emplace_back(kPiFactor * w, sm.pi.at(n));
    }
    if (ors.empty()) continue;  // nothing can touch this flow; rf = 1
    const Var op = m.add_binary("fwop_" + tag);
    opt::add_or(m, op, ors);
    sm.fwop[fi] = op;
    objective += LinExpr(op) * (b2 * penalty_of(sm.penalty_scale, risks[fi]) * fsol.amount[fi]);
    const double price = b3 * risks[fi];
    if (price > 0.0) {
      // rf = 1 - max reduction, written as a telescoping sum over the
      // distinct levels v_1 > v_2 > ...: y_j <= (placements reaching v_j).
      // Exact under the positive price on rf and much tighter than a
      // big-M min selection.
      const Var r = m.add_continuous(0.0, 1.0, "rf_" + tag);
      std::vector<double> levels;
      for (const auto& [v, x] : reductions) levels.push_back(v);
      std::sort(levels.begin(), levels.end(), std::greater<>());
      levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
      LinExpr def = LinExpr(r);
      for (std::size_t j = 0; j < levels.size(); ++j) {
        const double step = levels[j] - (j + 1 < levels.size() ? levels[j + 1] : 0.0);
        const Var y = m.add_continuous(0.0, 1.0, "rfy_" + tag + "_" + std::to_string(j));
        LinExpr reach = LinExpr(y);
        for (const auto& [v, x] : reductions) {
          if (v >= levels[j]) reach -= LinExpr(x);
        }
        m.add_constraint(reach, Relation::kLe, 0.0, "rfl_" + tag + "_" + std::to_string(j));
        def += LinExpr(y) * step;
      }
      m.add_constraint(def, Relation::kEq, 1.0, "rf_" + tag);
      sm.rf[fi] = r;
      objective += LinExpr(r) * price;
    }
  }
  m.add_objective(objective);
  return sm;
}

SecurityEvaluation evaluate_security(const Scenario& s, const PathPool& pool,
                                     const FunctionalSolution& fsol,
                                     const std::vector<double>& risks, double penalty_scale,
                                     const Placement& pl) {
  const auto& [b0, b1, b2, b3] = s.weights.beta;
  SecurityEvaluation ev;
  ev.breakdown[0] = b0 * (s.costs.fw_comp * pl.firewalls.size() +
                          s.costs.pi_comp * pl.inspections.size());
  for (const auto& n : pl.inspections) {
    ev.breakdown[1] += b1 * (fsol.load.count(n) ? fsol.load.at(n) : 0.0);
  }
  for (std::size_t fi = 0; fi < s.flows.size(); ++fi) {
    const auto& f = s.flows[fi];
    const Path& p = pool.path(fsol.active_path[fi]);
    bool blocked = false;
    double rf = 1.0;
    for (std::size_t rank = 0; rank < p.nodes.size(); ++rank) {
      const auto& n = p.nodes[rank];
      const double w = std::pow(0.5, static_cast<double>(rank));
      if (pl.firewalls.count({n, f.type}) || pl.firewalls.count({n, std::string(kAnyType)})) {
        blocked = true;
        rf = std::min(rf, 1.0 - w);
      }
      if (pl.inspections.count(n)) rf = std::min(rf, 1.0 - kPiFactor * w);
    }
    ev.blocked.push_back(blocked ? 1 : 0);
    ev.rf.push_back(rf);
    if (blocked) ev.breakdown[2] += b2 * penalty_of(penalty_scale, risks[fi]) * fsol.amount[fi];
    ev.breakdown[3] += b3 * risks[fi] * rf;
  }
  for (double t : ev.breakdown) ev.objective += t;
  return ev;
}

SecuritySolution solve_security(const Scenario& s, const PathPool& pool,
                                const FunctionalSolution& fsol, const SecurityModel& sm,
                                const opt::Backend& backend, const opt::Limits& limits) {
  const opt::Solution raw = backend.solve(sm.model, limits);
  if (raw.status == opt::SolveStatus::kInfeasible) {
    throw opt::InfeasibleError("security layer infeasible: memory limits conflict");
  }
  if (!raw.has_values()) {
    throw opt::OptError("security layer: solver stopped at a limit without a feasible point");
  }
  SecuritySolution sol;
  sol.nodes_explored = raw.nodes_explored;
  sol.penalty_scale = sm.penalty_scale;
  for (const auto& [key, v] : sm.fw) {
    if (raw.is_one(v)) sol.placement.firewalls.insert(key);
  }
  for (const auto& [n, v] : sm.pi) {
    if (raw.is_one(v)) sol.placement.inspections.insert(n);
  }
  const auto ev = evaluate_security(s, pool, fsol, sm.risks, sm.penalty_scale, sol.placement);
  sol.blocked = ev.blocked;
  sol.rf = ev.rf;
  sol.breakdown = ev.breakdown;
  sol.objective = raw.objective;

  auto problems = check_security(s, pool, fsol, sol);
  for (std::size_t fi = 0; fi < s.flows.size(); ++fi) {
    const int op = sm.fwop[fi] ? (raw.is_one(*sm.fwop[fi]) ? 1 : 0) : 0;
    if (op != sol.blocked[fi]) problems.push_back("fwOP disagrees with placements for flow " + std::to_string(fi));
    if (sm.rf[fi] && std::abs(raw.value(*sm.rf[fi]) - sol.rf[fi]) > opt::kFeasTol) {
      problems.push_back("rf is not the minimum multiplier for flow " + std::to_string(fi));
    }
  }
  if (std::abs(ev.objective - raw.objective) > 1e-6 * std::max(1.0, std::abs(ev.objective))) {
    problems.push_back("objective terms do not add up to the solver objective");
  }
  if (!problems.empty()) {
    std::string msg = "security solution failed validation:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw opt::OptError(msg);
  }
  return sol;
}

std::vector<std::string> check_security(const Scenario& s, const PathPool& pool,
                                        const FunctionalSolution& fsol,
                                        const SecuritySolution& sol, double eps) {
  std::vector<std::string> out;
  std::set<std::string> nodes;
  for (const auto& [n, t] : sol.placement.firewalls) nodes.insert(n);
  nodes.insert(sol.placement.inspections.begin(), sol.placement.inspections.end());
  for (const auto& n : nodes) {
    const Node* node = s.find_node(n);
    if (!node) {
      out.push_back("placement on unknown node " + n);
      continue;
    }
    if (!can_defend(s, *node)) out.push_back("placement on host " + n);
    if (memory_used(s, sol.placement, n) > node->mem + eps * std::max(1.0, node->mem)) {
      out.push_back("node " + n + ": memory exceeded");
    }
  }
  // Recompute blocked flows and rf from scratch.
  for (std::size_t fi = 0; fi < s.flows.size(); ++fi) {
    const Path& p = pool.path(fsol.active_path[fi]);
    bool blocked = false;
    double rf = 1.0;
    for (const auto& n : p.nodes) {
      const double w = std::pow(0.5, p.rank(n));
      const bool fw = sol.placement.firewalls.count({n, s.flows[fi].type}) ||
                      sol.placement.firewalls.count({n, std::string(kAnyType)});
      blocked = blocked || fw;
      rf = std::min({rf, fw ? 1.0 - w : 1.0,
                     sol.placement.inspections.count(n) ? 1.0 - kPiFactor * w : 1.0});
    }
    if (fi >= sol.blocked.size() || (sol.blocked[fi] != 0) != blocked) {
      out.push_back("flow " + std::to_string(fi) + ": blocked flag inconsistent");
    }
    if (fi >= sol.rf.size() || std::abs(sol.rf[fi] - rf) > eps) {
      out.push_back("flow " + std::to_string(fi) + ": rf inconsistent");
    }
    if (fi < sol.rf.size() && (sol.rf[fi] < -eps || sol.rf[fi] > 1.0 + eps)) {
      out.push_back("flow " + std::to_string(fi) + ": rf outside [0, 1]");
    }
  }
  return out;
}

std::string security_report(const Scenario& s, const SecuritySolution& sol) {
  std::ostringstream os;
  for (const auto& [n, t] : sol.placement.firewalls) os << "fw " << n << ' ' << t << '\n';
  for (const auto& n : sol.placement.inspections) os << "pi " << n << '\n';
  for (std::size_t fi = 0; fi < s.flows.size(); ++fi) {
    if (sol.blocked[fi]) {
      os << "blocked " << s.flows[fi].src << ' ' << s.flows[fi].dst << ' ' << s.flows[fi].type << '\n';
    }
  }
  os << "complexity " << sol.breakdown[0] << '\n'
     << "inspection_load " << sol.breakdown[1] << '\n'
     << "blocking_penalty " << sol.breakdown[2] << '\n'
     << "residual_risk " << sol.breakdown[3] << '\n';
  return os.str();
}

}  // namespace docsdn
