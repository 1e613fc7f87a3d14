#pragma once

#include "docsdn/optimkit/model.hpp"

namespace docsdn::opt {

class GuardExceeded : public OptError {
 public:
  using OptError::OptError;
};

// Depth-first branch-and-bound over the binaries with LP relaxation bounds.
// Quadratic terms are handled by tangent (outer-approximation) cuts that are
// refined until the under-estimate is tight, so leaves are solved exactly.
// Branches on the lowest-index fractional binary, 0-branch first.
Solution solve_exact(const Model& model, const Limits& limits = {});

class ExactBackend final : public Backend {
 public:
  Solution solve(const Model& model, const Limits& limits) const override {
    return solve_exact(model, limits);
  }
  std::string name() const override { return "exact"; }
};

}  // namespace docsdn::opt
