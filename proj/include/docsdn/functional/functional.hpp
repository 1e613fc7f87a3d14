#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "docsdn/kpaths/kpaths.hpp"
#include "docsdn/optimkit/model.hpp"
#include "docsdn/scenario/scenario.hpp"

namespace docsdn {

struct EquivalenceClass {
  int id = 0;
  std::set<std::string> members;
};

// Soft request to keep traffic touching `first` off the nodes used by
// traffic touching `second` (class ids).
struct SegregationRule {
  int first = 0;
  int second = 0;
  friend auto operator<=>(const SegregationRule&, const SegregationRule&) = default;
};

struct FunctionalModel {
  struct Candidate {
    int path;
    opt::Var active;
    opt::Var flow;
  };
  struct Share {
    int rule;  // index into `rules`
    std::string node;
    opt::Var var;
  };

  opt::Model model;
  std::vector<std::vector<Candidate>> candidates;  // per flow index
  std::map<std::string, opt::Var> load;
  std::map<std::pair<int, std::string>, opt::Var> equiv;  // (class id, node)
  std::vector<Share> share;
  std::vector<EquivalenceClass> classes;
  std::vector<SegregationRule> rules;
  double reward_constant = 0.0;  // alpha1 * -(|rules| * |nodes|)
};

struct FunctionalSolution {
  std::vector<int> active_path;  // per flow index: path id
  std::vector<double> amount;    // per flow index: flow on the active path
  std::map<std::string, double> load;
  std::map<std::pair<int, std::string>, int> equiv;
  std::map<std::pair<int, std::string>, int> share;  // (rule index, node)
  int share_count = 0;
  double objective = 0.0;
  double objective_no_cut_reward = 0.0;
  long nodes_explored = 0;
};

FunctionalModel build_functional_model(const Scenario& s, const PathPool& pool,
                                       const std::vector<EquivalenceClass>& classes,
                                       const std::vector<SegregationRule>& rules);

// Solves, extracts and re-validates. Throws opt::InfeasibleError with a
// diagnosis when no routing exists.
FunctionalSolution solve_functional(const Scenario& s, const PathPool& pool,
                                    const FunctionalModel& fm, const opt::Backend& backend,
                                    const opt::Limits& limits = {});

// Independent checks of capacity, demand, single-path, flow tightness and
// load bookkeeping. Empty when all hold within eps.
std::vector<std::string> check_functional(const Scenario& s, const PathPool& pool,
                                          const FunctionalSolution& sol, double eps = 1e-6);

// share(rule, n) recomputed from active paths: n lies on an active path
// touching each of the rule's classes.
std::map<std::pair<int, std::string>, int> recompute_share(
    const Scenario& s, const PathPool& pool, const FunctionalSolution& sol,
    const std::vector<EquivalenceClass>& classes, const std::vector<SegregationRule>& rules);

// Routing objective without the cut reward, evaluated from a routing.
double functional_cost(const Scenario& s, const PathPool& pool, const std::vector<int>& active,
                       const std::vector<double>& amount);

std::string functional_report(const Scenario& s, const PathPool& pool,
                              const FunctionalSolution& sol);

}  // namespace docsdn
