#include "docsdn/optimkit/gadgets.hpp"

#include <cmath>

namespace docsdn::opt {
namespace {

void require_binary(const Model& model, Var v, const char* gadget) {
  if (model.var(v).kind != VarKind::kBinary) {
    throw OptError(std::string(gadget) + ": non-binary argument " +
                   model.var(v).name);
  }
}

}  // namespace

void add_or(Model& model, Var y, std::span<const Var> xs) {
  require_binary(model, y, "add_or");
  for (Var x : xs) require_binary(model, x, "add_or");
  const std::string& yn = model.var(y).name;
  LinExpr upper = LinExpr(y);
  for (Var x : xs) {
    model.add_constraint(LinExpr(y) - LinExpr(x), Relation::kGe, 0.0,
                         yn + "_ge");
    upper -= LinExpr(x);
  }
  model.add_constraint(upper, Relation::kLe, 0.0, yn + "_le");
}

void add_and(Model& model, Var y, std::span<const Var> xs) {
  require_binary(model, y, "add_and");
  for (Var x : xs) require_binary(model, x, "add_and");
  const std::string& yn = model.var(y).name;
  LinExpr lower = LinExpr(y);
  for (Var x : xs) {
    model.add_constraint(LinExpr(y) - LinExpr(x), Relation::kLe, 0.0,
                         yn + "_le");
    lower -= LinExpr(x);
  }
  // y - sum(x) >= 1 - |xs|
  model.add_constraint(lower, Relation::kGe,
                       1.0 - static_cast<double>(xs.size()), yn + "_ge");
}

std::vector<Var> add_min_select(Model& model, Var r,
                                std::span<const LinExpr> terms,
                                const std::string& prefix) {
  if (terms.empty()) throw OptError("add_min_select: empty term list");
  if (model.var(r).kind != VarKind::kContinuous) {
    throw OptError("add_min_select: selected value must be continuous");
  }
  std::vector<Var> sel;
  sel.reserve(terms.size());
  LinExpr pick_one;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    Var z = model.add_binary(prefix + "_" + std::to_string(i));
    sel.push_back(z);
    pick_one += LinExpr(z);
    // r - term_i - z_i >= -1
    model.add_constraint(LinExpr(r) - terms[i] - LinExpr(z), Relation::kGe,
                         -1.0, prefix + "_bound_" + std::to_string(i));
  }
  model.add_constraint(pick_one, Relation::kEq, 1.0, prefix + "_one");
  return sel;
}

void add_indicator_lb(Model& model, Var x, Var f, double lb, double ub) {
  require_binary(model, x, "add_indicator_lb");
  if (!std::isfinite(ub)) throw OptError("add_indicator_lb: ub not finite");
  if (lb < 0.0 || ub < lb) {
    throw OptError("add_indicator_lb: need 0 <= lb <= ub");
  }
  const std::string& fn = model.var(f).name;
  model.add_constraint(LinExpr(f) - lb * LinExpr(x), Relation::kGe, 0.0,
                       fn + "_on");
  model.add_constraint(LinExpr(f) - ub * LinExpr(x), Relation::kLe, 0.0,
                       fn + "_off");
}

}  // namespace docsdn::opt
