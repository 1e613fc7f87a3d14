#include "docsdn/optimkit/model.hpp"

#include <cmath>
#include <sstream>

namespace docsdn::opt {

LinExpr& LinExpr::add(double coef, Var v) {
  if (!std::isfinite(coef)) throw OptError("non-finite coefficient");
  if (coef != 0.0) terms_.push_back({coef, v});
  return *this;
}

LinExpr& LinExpr::operator+=(const LinExpr& other) {
  for (const auto& t : other.terms_) add(t.coef, t.var);
  constant_ += other.constant_;
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& other) {
  for (const auto& t : other.terms_) add(-t.coef, t.var);
  constant_ -= other.constant_;
  return *this;
}

LinExpr& LinExpr::operator*=(double k) {
  if (k == 0.0) {
    terms_.clear();
    constant_ = 0.0;
    return *this;
  }
  for (auto& t : terms_) t.coef *= k;
  constant_ *= k;
  return *this;
}

double LinExpr::evaluate(std::span<const double> values) const {
  double s = constant_;
  for (const auto& t : terms_) s += t.coef * values[t.var.index];
  return s;
}

Var Model::add_binary(std::string name) {
  vars_.push_back({VarKind::kBinary, 0.0, 1.0, std::move(name)});
  ++num_binaries_;
  return Var{static_cast<int>(vars_.size()) - 1};
}

Var Model::add_continuous(double lo, double hi, std::string name) {
  if (lo > hi || std::isnan(lo) || std::isnan(hi)) {
    throw OptError("bad bounds for variable " + name);
  }
  vars_.push_back({VarKind::kContinuous, lo, hi, std::move(name)});
  return Var{static_cast<int>(vars_.size()) - 1};
}

void Model::check_var(Var v) const {
  if (v.index < 0 || static_cast<std::size_t>(v.index) >= vars_.size()) {
    throw OptError("constraint references undeclared variable");
  }
}

void Model::add_constraint(const LinExpr& expr, Relation rel, double rhs,
                           std::string name) {
  if (!std::isfinite(rhs)) throw OptError("non-finite right-hand side");
  LinExpr normalized;
  for (const auto& t : expr.terms()) {
    check_var(t.var);
    normalized.add(t.coef, t.var);
  }
  constraints_.push_back(
      {std::move(normalized), rel, rhs - expr.constant(), std::move(name)});
}

void Model::add_objective(const LinExpr& expr) {
  for (const auto& t : expr.terms()) check_var(t.var);
  objective_ += expr;
}

void Model::add_quadratic(double coef, Var v, double range_hi) {
  check_var(v);
  if (!(coef >= 0.0) || !std::isfinite(coef)) {
    throw OptError("quadratic coefficient must be finite and non-negative");
  }
  if (coef > 0.0) quad_.push_back({coef, v, range_hi});
}

double Model::objective_value(std::span<const double> values) const {
  double obj = objective_.evaluate(values);
  for (const auto& q : quad_) {
    const double x = values[q.var.index];
    obj += q.coef * x * x;
  }
  return obj;
}

std::optional<std::string> Model::find_violation(
    std::span<const double> values, double eps_feas, double eps_int) const {
  if (values.size() != vars_.size()) return "value vector has wrong size";
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    const auto& v = vars_[j];
    const double x = values[j];
    if (!std::isfinite(x)) return "non-finite value for " + v.name;
    if (x < v.lo - eps_feas || x > v.hi + eps_feas) {
      std::ostringstream os;
      os << "bound violated: " << v.name << " = " << x;
      return os.str();
    }
    if (v.kind == VarKind::kBinary &&
        std::min(std::abs(x), std::abs(1.0 - x)) > eps_int) {
      std::ostringstream os;
      os << "fractional binary: " << v.name << " = " << x;
      return os.str();
    }
  }
  for (const auto& c : constraints_) {
    const double lhs = c.expr.evaluate(values);
    const double tol = eps_feas * std::max(1.0, std::abs(c.rhs));
    bool ok = true;
    switch (c.rel) {
      case Relation::kLe: ok = lhs <= c.rhs + tol; break;
      case Relation::kGe: ok = lhs >= c.rhs - tol; break;
      case Relation::kEq: ok = std::abs(lhs - c.rhs) <= tol; break;
    }
    if (!ok) {
      std::ostringstream os;
      os << "constraint violated: " << (c.name.empty() ? "<unnamed>" : c.name)
         << " lhs=" << lhs << " rhs=" << c.rhs;
      return os.str();
    }
  }
  return std::nullopt;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kLimit: return "limit";
  }
  return "?";
}

}  // namespace docsdn::opt
