#pragma once

#include <deque>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "docsdn/functional/functional.hpp"
#include "docsdn/kpaths/kpaths.hpp"
#include "docsdn/scenario/scenario.hpp"
#include "docsdn/security/security.hpp"

namespace docsdn {

inline constexpr double kImproveTol = 1e-6;

// Unordered pair of node sets; normalized so that first <= second.
struct CutRule {
  std::set<std::string> first;
  std::set<std::string> second;

  static CutRule make(std::set<std::string> a, std::set<std::string> b);
  std::string str() const;  // "({H1})x({H2})"
  friend auto operator<=>(const CutRule&, const CutRule&) = default;
};

enum class CutStatus { kPending, kTrialed, kAccepted, kRevoked };

struct Cut {
  CutRule rule;
  int blocked_flow = -1;               // collateral flow that triggered it
  std::set<std::string> risky_nodes;   // high-risk hosts behind the block
  CutStatus status = CutStatus::kPending;
  double score = 0.0;                  // blocked demand
};

struct Objectives {
  double functional_no_reward = 0.0;
  double security = 0.0;
  double overall() const { return functional_no_reward + security; }
};

enum class Judgement { kBeneficial, kHarmful };

const char* to_string(Judgement j);

// Cut thresholds derived for one iteration.
struct Thresholds {
  double low_risk = 0.0;   // flows strictly below are "low risk"
  double high_risk = 0.0;  // hosts at or above (and above the minimum) are "high risk"
  std::set<std::string> high_risk_hosts;
};

Thresholds derive_thresholds(const Scenario& s, const std::vector<double>& risks);

// Collateral blocks: each blocked low-risk flow whose active path shares a
// node with an active path of a high-risk host yields the cut
// ({host}, endpoints of the flow that are hosts). Sorted by score, highest
// first; rules merge (scores add) and already-proposed rules are dropped.
std::vector<Cut> generate_candidates(const Scenario& s, const PathPool& pool,
                                     const FunctionalSolution& fsol, const SecuritySolution& ssol,
                                     const std::vector<double>& risks,
                                     const std::set<CutRule>& already_proposed = {});

// Beneficial unless the combined objective grows by more than tol. Ties are
// kept: isolating a host usually takes several neutral moves before the
// last one pays off.
Judgement judge_cut(const Objectives& prev, const Objectives& curr, double tol = kImproveTol);

class CutQueue {
 public:
  // Drops untried cuts and enqueues the fresh ones never trialed. A rule
  // discarded before its trial may come back from a later generation.
  void repopulate(std::vector<Cut> fresh);
  std::optional<Cut> next();
  bool empty() const { return pending_.empty(); }
  std::size_t size() const { return pending_.size(); }
  const std::set<CutRule>& trialed() const { return trialed_; }
  std::size_t total_proposed() const { return proposed_.size(); }

 private:
  std::deque<Cut> pending_;
  std::set<CutRule> proposed_;
  std::set<CutRule> trialed_;
};

// Arbitration state: the accepted rules plus at most one trial.
struct FeedbackState {
  CutQueue queue;
  std::vector<Cut> accepted;
  std::vector<Cut> revoked;
  std::optional<Cut> trial;

  // Rules to hand the functional layer: accepted ones plus the trial.
  std::vector<CutRule> active_rules() const;
};

enum class Action { kTrial, kTerminate };

// Resolves the outstanding trial (if any) with `judgement`; on acceptance the
// queue is rebuilt from `fresh`. Then dequeues the next trial or terminates.
Action step(FeedbackState& state, std::optional<Judgement> judgement, std::vector<Cut> fresh);

}  // namespace docsdn
