#include "docsdn/risk/risk.hpp"

#include <deque>
#include <sstream>

namespace docsdn {
namespace {

const std::set<std::string> kNoNeighbors;

}  // namespace

void LogicalTopology::add_path(const Path& p) {
  for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
    adj_[p.nodes[i]].insert(p.nodes[i + 1]);
    adj_[p.nodes[i + 1]].insert(p.nodes[i]);
  }
}

const std::set<std::string>& LogicalTopology::neighbors(const std::string& n) const {
  auto it = adj_.find(n);
  return it == adj_.end() ? kNoNeighbors : it->second;
}

bool LogicalTopology::adjacent(const std::string& a, const std::string& b) const {
  return neighbors(a).count(b) > 0;
}

std::size_t LogicalTopology::num_edges() const {
  std::size_t twice = 0;
  for (const auto& [n, set] : adj_) twice += set.size();
  return twice / 2;
}

LogicalTopology logical_topology(const FunctionalSolution& sol, const PathPool& pool) {
  LogicalTopology t;
  for (int pid : sol.active_path) {
    if (pid >= 0) t.add_path(pool.path(pid));
  }
  return t;
}

std::set<std::string> d_k(const LogicalTopology& topo, const std::string& n, int k) {
  std::set<std::string> seen{n};
  std::deque<std::pair<std::string, int>> queue{{n, 0}};
  while (!queue.empty()) {
    auto [u, d] = queue.front();
    queue.pop_front();
    if (d == k) continue;
    for (const auto& v : topo.neighbors(u)) {
      if (seen.insert(v).second) queue.emplace_back(v, d + 1);
    }
  }
  return seen;
}

double flow_risk(const Scenario& s, const LogicalTopology& topo, const Path& p,
                 const std::string& type) {
  if (type == kAnyType) throw ScenarioError("flow risk is undefined for the wildcard type");
  std::set<std::string> covered = d_k(topo, p.src(), s.risk.radius);
  const auto at_dst = d_k(topo, p.dst(), s.risk.radius);
  covered.insert(at_dst.begin(), at_dst.end());
  double total = 0.0;
  for (const auto& n : covered) total += s.risk.at(n, type) * s.risk.at(n, type);
  for (const auto& n : p.nodes) {
    if (!covered.count(n)) total += s.risk.at(n, type) * s.risk.at(n, type);
  }
  return total;
}

std::vector<double> compute_flow_risks(const Scenario& s, const PathPool& pool,
                                       const FunctionalSolution& sol, const RiskFunction& fn) {
  const LogicalTopology topo = logical_topology(sol, pool);
  std::vector<double> out;
  out.reserve(s.flows.size());
  for (std::size_t fi = 0; fi < s.flows.size(); ++fi) {
    const double r = fn(s, topo, pool.path(sol.active_path.at(fi)), s.flows[fi].type);
    if (!(r >= 0.0)) throw ScenarioError("risk function returned a negative or NaN value");
    out.push_back(r);
  }
  return out;
}

std::string risk_report(const Scenario& s, const PathPool& pool, const FunctionalSolution& sol,
                        const std::vector<double>& risks) {
  std::ostringstream os;
  double total = 0.0;
  for (std::size_t fi = 0; fi < s.flows.size(); ++fi) {
    os << "risk " << pool.path(sol.active_path[fi]).str() << ' ' << s.flows[fi].type << ' '
       << risks[fi] << '\n';
    total += risks[fi];
  }
  os << "total " << total << '\n';
  return os.str();
}

}  // namespace docsdn
