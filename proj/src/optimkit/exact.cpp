#include "docsdn/optimkit/exact.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "docsdn/optimkit/simplex.hpp"

namespace docsdn::opt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLpIntTol = 1e-7;
constexpr double kPruneTol = 1e-9;
constexpr int kMaxCutRounds = 400;
// Relative under-estimate of a quadratic term accepted as converged.
constexpr double kQuadGapTol = 1e-10;

struct BranchNode {
  std::vector<std::pair<int, double>> fixes;
};

class BranchAndBound {
 public:
  BranchAndBound(const Model& model, const Limits& limits)
      : model_(model), limits_(limits) {
    const auto& vars = model.vars();
    const int n = static_cast<int>(vars.size());
    lp_.cost.assign(n, 0.0);
    lp_.lo.resize(n);
    lp_.hi.resize(n);
    for (int j = 0; j < n; ++j) {
      lp_.lo[j] = vars[j].lo;
      lp_.hi[j] = vars[j].hi;
      if (vars[j].kind == VarKind::kBinary) binaries_.push_back(j);
    }
    for (const auto& t : model.linear_objective().terms()) {
      lp_.cost[t.var.index] += t.coef;
    }
    for (const auto& c : model.constraints()) {
      lp::Row row{{}, c.rel, c.rhs};
      for (const auto& t : c.expr.terms()) row.coefs.emplace_back(t.var.index, t.coef);
      lp_.rows.push_back(std::move(row));
    }
    // Epigraph column per quadratic term: coef * t, t >= x^2 via tangents.
    for (const auto& q : model.quadratic_objective()) {
      const int t = static_cast<int>(lp_.cost.size());
      lp_.cost.push_back(q.coef);
      lp_.lo.push_back(0.0);
      lp_.hi.push_back(kInf);
      epigraph_.push_back(t);
      const double lo = model.var(q.var).lo;
      const double hi = model.var(q.var).hi;
      double anchor = std::clamp(0.0, lo, hi);
      add_tangent(q.var.index, t, anchor);
      if (std::isfinite(q.range_hi) && q.range_hi > anchor) {
        add_tangent(q.var.index, t, 0.5 * (anchor + q.range_hi));
        add_tangent(q.var.index, t, q.range_hi);
      }
    }
    base_lo_ = lp_.lo;
    base_hi_ = lp_.hi;
  }

  Solution run() {
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    Solution sol;
    std::vector<BranchNode> stack;
    stack.push_back({});
    bool hit_limit = false;
    while (!stack.empty()) {
      const double elapsed =
          std::chrono::duration<double>(Clock::now() - start).count();
      if (elapsed > limits_.time_limit_s) {
        hit_limit = true;
        break;
      }
      BranchNode node = std::move(stack.back());
      stack.pop_back();
      ++sol.nodes_explored;

      lp_.lo = base_lo_;
      lp_.hi = base_hi_;
      for (const auto& [j, v] : node.fixes) {
        lp_.lo[j] = v;
        lp_.hi[j] = v;
      }
      std::vector<double> x;
      if (!solve_node(x)) continue;

      int branch_var = -1;
      for (int j : binaries_) {
        const double v = x[j];
        if (std::min(v, 1.0 - v) > kLpIntTol) {
          branch_var = j;
          break;
        }
      }
      if (branch_var < 0) {
        std::vector<double> values(x.begin(), x.begin() + model_.num_vars());
        for (int j : binaries_) values[j] = std::round(values[j]);
        const double obj = model_.objective_value(values);
        if (obj < incumbent_obj_ - kPruneTol) {
          incumbent_obj_ = obj;
          incumbent_ = std::move(values);
          have_incumbent_ = true;
        }
        continue;
      }
      BranchNode one = node;
      one.fixes.emplace_back(branch_var, 1.0);
      node.fixes.emplace_back(branch_var, 0.0);
      stack.push_back(std::move(one));
      stack.push_back(std::move(node));
    }
    if (have_incumbent_) {
      sol.values = std::move(incumbent_);
      sol.objective = model_.objective_value(sol.values);
      sol.status = hit_limit ? SolveStatus::kLimit : SolveStatus::kOptimal;
    } else {
      sol.status = hit_limit ? SolveStatus::kLimit : SolveStatus::kInfeasible;
    }
    return sol;
  }

 private:
  void add_tangent(int x, int t, double at) {
    // t >= 2*at*x - at^2
    lp_.rows.push_back({{{t, 1.0}, {x, -2.0 * at}}, Relation::kGe, -at * at});
  }

  // Solves the node relaxation, refining tangent cuts until tight. Returns
  // false when the node is infeasible or dominated by the incumbent.
  bool solve_node(std::vector<double>& x) {
    const double constant = model_.linear_objective().constant();
    for (int round = 0; round < kMaxCutRounds; ++round) {
      lp::Result r = lp::solve(lp_);
      if (r.status == lp::Status::kInfeasible) return false;
      if (r.status == lp::Status::kUnbounded) {
        throw OptError("solve_exact: relaxation unbounded");
      }
      if (r.status == lp::Status::kIterationLimit) {
        throw OptError("solve_exact: simplex iteration limit");
      }
      if (r.objective + constant >= incumbent_obj_ - kPruneTol) return false;
      bool refined = false;
      const auto& quad = model_.quadratic_objective();
      for (std::size_t k = 0; k < quad.size(); ++k) {
        const int xi = quad[k].var.index;
        const double xv = r.x[xi];
        const double gap = quad[k].coef * (xv * xv - r.x[epigraph_[k]]);
        if (gap > kQuadGapTol * std::max(1.0, quad[k].coef * xv * xv)) {
          add_tangent(xi, epigraph_[k], xv);
          refined = true;
        }
      }
      if (!refined) {
        x = std::move(r.x);
        return true;
      }
    }
    throw OptError("solve_exact: quadratic refinement did not converge");
  }

  const Model& model_;
  const Limits& limits_;
  lp::Problem lp_;
  std::vector<double> base_lo_, base_hi_;
  std::vector<int> binaries_;
  std::vector<int> epigraph_;
  std::vector<double> incumbent_;
  bool have_incumbent_ = false;
  double incumbent_obj_ = kInf;
};

}  // namespace

Solution solve_exact(const Model& model, const Limits& limits) {
  if (model.num_binaries() > limits.max_exact_binaries) {
    throw GuardExceeded("solve_exact: " + std::to_string(model.num_binaries()) +
                        " binaries exceeds guard of " +
                        std::to_string(limits.max_exact_binaries));
  }
  BranchAndBound bb(model, limits);
  return bb.run();
}

}  // namespace docsdn::opt
