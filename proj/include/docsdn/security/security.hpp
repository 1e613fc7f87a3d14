#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "docsdn/functional/functional.hpp"
#include "docsdn/kpaths/kpaths.hpp"
#include "docsdn/optimkit/model.hpp"
#include "docsdn/scenario/scenario.hpp"

namespace docsdn {

struct Placement {
  std::set<std::pair<std::string, std::string>> firewalls;  // (node, type or "*")
  std::set<std::string> inspections;
  friend bool operator==(const Placement&, const Placement&) = default;
};

// The four weighted objective terms: complexity, inspection load, blocking
// penalty and residual risk.
using SecurityBreakdown = std::array<double, 4>;

struct SecurityEvaluation {
  std::vector<char> blocked;  // per flow
  std::vector<double> rf;     // per flow
  SecurityBreakdown breakdown{};
  double objective = 0.0;
};

struct SecurityModel {
  opt::Model model;
  std::map<std::pair<std::string, std::string>, opt::Var> fw;
  std::map<std::string, opt::Var> pi;
  std::vector<std::optional<opt::Var>> fwop;  // per flow
  std::vector<std::optional<opt::Var>> rf;    // per flow, when risk is priced
  std::vector<double> risks;
  double penalty_scale = 1.0;
};

struct SecuritySolution {
  Placement placement;
  std::vector<char> blocked;
  std::vector<double> rf;
  double penalty_scale = 1.0;
  double objective = 0.0;
  SecurityBreakdown breakdown{};
  long nodes_explored = 0;

  int blocked_count() const;
};

// Whether fw/pi may be placed on the node at all.
bool can_defend(const Scenario& s, const Node& n);

// penalty(p,T) = scale / flowRisk; scale defaults to the largest risk.
double default_penalty_scale(const std::vector<double>& risks);

SecurityModel build_security_model(const Scenario& s, const PathPool& pool,
                                   const FunctionalSolution& fsol, const std::vector<double>& risks,
                                   std::optional<double> penalty_scale = std::nullopt);

SecuritySolution solve_security(const Scenario& s, const PathPool& pool,
                                const FunctionalSolution& fsol, const SecurityModel& sm,
                                const opt::Backend& backend, const opt::Limits& limits = {});

// Objective and derived quantities of a given placement, computed directly.
SecurityEvaluation evaluate_security(const Scenario& s, const PathPool& pool,
                                     const FunctionalSolution& fsol,
                                     const std::vector<double>& risks, double penalty_scale,
                                     const Placement& placement);

// Memory limits, blocked-set and rf consistency. Empty when all hold.
std::vector<std::string> check_security(const Scenario& s, const PathPool& pool,
                                        const FunctionalSolution& fsol,
                                        const SecuritySolution& sol, double eps = 1e-6);

std::string security_report(const Scenario& s, const SecuritySolution& sol);

}  // namespace docsdn
