#pragma once

#include <span>
#include <string>
#include <vector>

#include "docsdn/optimkit/model.hpp"

// Exact linearizations of boolean and selection logic. Each gadget only adds
// constraints (and, for min-select, selection binaries) to the model.
namespace docsdn::opt {

// y = OR(xs):  y >= x_i for all i,  y <= sum(x_i).
void add_or(Model& model, Var y, std::span<const Var> xs);

// y = AND(xs): y <= x_i for all i,  y >= sum(x_i) - (|xs| - 1).
void add_and(Model& model, Var y, std::span<const Var> xs);

// r >= term_i - (1 - z_i), sum(z_i) = 1, z_i binary. Under minimization
// pressure on r this yields r = min_i(term_i). Terms must lie in [0, 1].
// Returns the selection binaries in term order.
std::vector<Var> add_min_select(Model& model, Var r,
                                std::span<const LinExpr> terms,
                                const std::string& prefix = "sel");

// f >= lb * x and f <= ub * x.
void add_indicator_lb(Model& model, Var x, Var f, double lb, double ub);

}  // namespace docsdn::opt
