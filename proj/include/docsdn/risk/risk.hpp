#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "docsdn/functional/functional.hpp"
#include "docsdn/kpaths/kpaths.hpp"
#include "docsdn/scenario/scenario.hpp"

namespace docsdn {

// Adjacency induced by consecutive nodes of the active paths.
class LogicalTopology {
 public:
  void add_path(const Path& p);
  const std::set<std::string>& neighbors(const std::string& n) const;
  bool adjacent(const std::string& a, const std::string& b) const;
  std::size_t num_edges() const;
  bool empty() const { return adj_.empty(); }

 private:
  std::map<std::string, std::set<std::string>> adj_;
};

LogicalTopology logical_topology(const FunctionalSolution& sol, const PathPool& pool);

// Nodes within k logical hops of n, n included.
std::set<std::string> d_k(const LogicalTopology& topo, const std::string& n, int k);

// Squared node risks summed over d_r(src) U d_r(dst) U N(p), each node once,
// with r the scenario's risk radius.
double flow_risk(const Scenario& s, const LogicalTopology& topo, const Path& p,
                 const std::string& type);

using RiskFunction = std::function<double(const Scenario&, const LogicalTopology&, const Path&,
                                          const std::string&)>;

// Risk of every flow on its active path.
std::vector<double> compute_flow_risks(const Scenario& s, const PathPool& pool,
                                       const FunctionalSolution& sol,
                                       const RiskFunction& fn = flow_risk);

std::string risk_report(const Scenario& s, const PathPool& pool, const FunctionalSolution& sol,
                        const std::vector<double>& risks);

}  // namespace docsdn
