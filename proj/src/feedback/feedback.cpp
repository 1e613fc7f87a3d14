#include "docsdn/feedback/feedback.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace docsdn {
namespace {

std::string set_str(const std::set<std::string>& s) {
  std::string out = "{";
  for (const auto& x : s) out += (out.size() > 1 ? "," : "") + x;
  return out + "}";
}

}  // namespace

CutRule CutRule::make(std::set<std::string> a, std::set<std::string> b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

std::string CutRule::str() const { return "(" + set_str(first) + ")x(" + set_str(second) + ")"; }

const char* to_string(Judgement j) {
  return j == Judgement::kBeneficial ? "beneficial" : "harmful";
}

Thresholds derive_thresholds(const Scenario& s, const std::vector<double>& risks) {
  Thresholds th;
  if (s.feedback.low_risk_threshold) {
    th.low_risk = *s.feedback.low_risk_threshold;
  } else if (!risks.empty()) {
    // Geometric mean of median and maximum: a plain median misclassifies
    // when most flows share the lowest risk.
    std::vector<double> sorted = risks;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    th.low_risk = std::sqrt(median * sorted.back());
  }

  std::map<std::string, double> host_risk;
  for (const auto& n : s.nodes) {
    if (n.kind != NodeKind::kHost) continue;
    double r = 0.0;
    for (const auto& t : s.traffic_types) r = std::max(r, s.risk.at(n.id, t));
    host_risk[n.id] = r;
  }
  if (host_risk.empty()) return th;
  double lo = host_risk.begin()->second, hi = lo;
  for (const auto& [h, r] : host_risk) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  th.high_risk = s.feedback.high_risk_fraction * hi;
  for (const auto& [h, r] : host_risk) {
    if (r >= th.high_risk && r > lo) th.high_risk_hosts.insert(h);
  }
  return th;
}

std::vector<Cut> generate_candidates(const Scenario& s, const PathPool& pool,
                                     const FunctionalSolution& fsol, const SecuritySolution& ssol,
                                     const std::vector<double>& risks,
                                     const std::set<CutRule>& already_proposed) {
  const Thresholds th = derive_thresholds(s, risks);
  // Nodes used by active paths touching each high-risk host.
  std::map<std::string, std::set<std::string>> reach;
  for (const auto& h : th.high_risk_hosts) {
    for (int pid : fsol.active_path) {
      const Path& p = pool.path(pid);
      if (p.contains(h)) reach[h].insert(p.nodes.begin(), p.nodes.end());
    }
  }

  std::map<CutRule, Cut> merged;
  for (std::size_t fi = 0; fi < s.flows.size(); ++fi) {
    if (!ssol.blocked[fi] || !(risks[fi] < th.low_risk)) continue;
    const auto& f = s.flows[fi];
    const Path& p = pool.path(fsol.active_path[fi]);
    std::set<std::string> ends;
    for (const auto* id : {&f.src, &f.dst}) {
      if (s.node(*id).kind == NodeKind::kHost) ends.insert(*id);
    }
    for (const auto& [h, nodes] : reach) {
      if (ends.empty() || ends.count(h)) continue;
      const bool meets = std::any_of(p.nodes.begin(), p.nodes.end(),
                                     [&](const std::string& n) { return nodes.count(n) > 0; });
      if (!meets) continue;
      CutRule rule = CutRule::make({h}, ends);
      if (already_proposed.count(rule)) continue;
      auto [it, fresh] = merged.try_emplace(rule);
      Cut& c = it->second;
      if (fresh) {
        c.rule = rule;
        c.blocked_flow = static_cast<int>(fi);
      }
      c.risky_nodes.insert(h);
      c.score += f.demand;
    }
  }
  std::vector<Cut> out;
  for (auto& [rule, c] : merged) out.push_back(std::move(c));
  std::stable_sort(out.begin(), out.end(), [](const Cut& a, const Cut& b) { return a.score > b.score; });
  return out;
}

Judgement judge_cut(const Objectives& prev, const Objectives& curr, double tol) {
  return curr.overall() <= prev.overall() + tol ? Judgement::kBeneficial : Judgement::kHarmful;
}

void CutQueue::repopulate(std::vector<Cut> fresh) {
  pending_.clear();
  std::set<CutRule> queued;
  for (auto& c : fresh) {
    if (trialed_.count(c.rule) || !queued.insert(c.rule).second) continue;
    proposed_.insert(c.rule);
    c.status = CutStatus::kPending;
    pending_.push_back(std::move(c));
  }
}

std::optional<Cut> CutQueue::next() {
  if (pending_.empty()) return std::nullopt;
  Cut c = std::move(pending_.front());
  pending_.pop_front();
  trialed_.insert(c.rule);
  c.status = CutStatus::kTrialed;
  return c;
}

std::vector<CutRule> FeedbackState::active_rules() const {
  std::vector<CutRule> out;
  for (const auto& c : accepted) out.push_back(c.rule);
  if (trial) out.push_back(trial->rule);
  return out;
}

Action step(FeedbackState& state, std::optional<Judgement> judgement, std::vector<Cut> fresh) {
  if (state.trial) {
    if (!judgement) throw std::logic_error("step: outstanding trial needs a judgement");
    Cut c = std::move(*state.trial);
    state.trial.reset();
    if (*judgement == Judgement::kBeneficial) {
      c.status = CutStatus::kAccepted;
      state.accepted.push_back(std::move(c));
      state.queue.repopulate(std::move(fresh));
    } else {
      c.status = CutStatus::kRevoked;
      state.revoked.push_back(std::move(c));
    }
  } else {
    state.queue.repopulate(std::move(fresh));
  }
  state.trial = state.queue.next();
  return state.trial ? Action::kTrial : Action::kTerminate;
}

}  // namespace docsdn
