#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "docsdn/feedback/feedback.hpp"
#include "docsdn/functional/functional.hpp"
#include "docsdn/kpaths/kpaths.hpp"
#include "docsdn/optimkit/model.hpp"
#include "docsdn/risk/risk.hpp"
#include "docsdn/scenario/scenario.hpp"
#include "docsdn/security/security.hpp"

namespace docsdn {

struct IterationRecord {
  int index = 0;
  double func_obj = 0.0;
  double func_obj_no_reward = 0.0;
  double sec_obj = 0.0;
  double overall = 0.0;
  double network_risk = 0.0;  // sum of flow risks over served flows
  int served = 0;
  int blocked = 0;
  long nodes_explored = 0;
  std::string trialed_cut;  // empty on the first iteration
  std::optional<Judgement> judgement;
  int accepted_rules = 0;
  double seconds = 0.0;
};

// Complete configuration produced by one iteration.
struct Snapshot {
  FunctionalSolution functional;
  SecuritySolution security;
  std::vector<double> risks;
  std::vector<CutRule> rules;
};

struct RunOptions {
  opt::Limits limits;
  int max_iterations = 1000;
  double wall_budget_s = 600.0;
  RiskFunction risk = flow_risk;
};

struct RunResult {
  PathPool pool;
  std::vector<IterationRecord> history;
  std::vector<Snapshot> snapshots;  // parallel to history
  int best_iteration = 0;
  std::vector<std::string> cut_log;
  int beneficial = 0;
  int harmful = 0;
  std::size_t proposed = 0;
  bool stopped_by_limit = false;
  double wall_time = 0.0;

  const Snapshot& best() const { return snapshots.at(best_iteration); }
  // Iteration 0 followed by every accepted trial.
  std::vector<int> incumbents() const;
};

RunResult run_framework(const Scenario& s, const opt::Backend& backend,
                        const RunOptions& options = {});

// Match/action program for the best configuration: drops, then inspection,
// then forwards, per node in scenario order.
std::string emit_sdn_fragments(const Scenario& s, const RunResult& result);

std::string report_text(const Scenario& s, const RunResult& result);
std::string report_csv(const RunResult& result);

// Topology annotated with the given iteration's placements and risks.
std::string iteration_dot(const Scenario& s, const RunResult& result, int iteration);

}  // namespace docsdn
