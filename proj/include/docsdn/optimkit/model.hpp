#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace docsdn::opt {

inline constexpr double kFeasTol = 1e-6;
inline constexpr double kIntTol = 1e-6;

class OptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A layer model has no feasible point; the message names the likely cause.
class InfeasibleError : public OptError {
 public:
  using OptError::OptError;
};

enum class VarKind { kBinary, kContinuous };

// Handle into a Model's variable table. Indices follow creation order.
struct Var {
  int index = -1;
  friend bool operator==(Var, Var) = default;
  friend auto operator<=>(Var, Var) = default;
};

struct VarInfo {
  VarKind kind;
  double lo;
  double hi;
  std::string name;
};

struct Term {
  double coef;
  Var var;
};

class LinExpr {
 public:
  LinExpr() = default;
  LinExpr(double constant) : constant_(constant) {}  // NOLINT
  LinExpr(Var v) { terms_.push_back({1.0, v}); }     // NOLINT

  LinExpr& add(double coef, Var v);
  LinExpr& add_constant(double c) {
    constant_ += c;
    return *this;
  }

  LinExpr& operator+=(const LinExpr& other);
  LinExpr& operator-=(const LinExpr& other);
  LinExpr& operator*=(double k);

  friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
  friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
  friend LinExpr operator*(LinExpr a, double k) { return a *= k; }
  friend LinExpr operator*(double k, LinExpr a) { return a *= k; }

  const std::vector<Term>& terms() const { return terms_; }
  double constant() const { return constant_; }
  double evaluate(std::span<const double> values) const;

 private:
  std::vector<Term> terms_;
  double constant_ = 0.0;
};

enum class Relation { kLe, kEq, kGe };

// Stored normalized: expr has no constant, i.e. sum(terms) rel rhs.
struct Constraint {
  LinExpr expr;
  Relation rel;
  double rhs;
  std::string name;
};

// coef * var^2 in the objective. range_hi is an upper bound on var at any
// optimum; the piecewise export places its breakpoints on [lo, range_hi].
struct QuadTerm {
  double coef;
  Var var;
  double range_hi;
};

// Solver-neutral minimization model: binary/continuous variables, linear
// constraints, linear objective plus separable convex quadratic terms.
class Model {
 public:
  Var add_binary(std::string name);
  Var add_continuous(double lo, double hi, std::string name);

  void add_constraint(const LinExpr& expr, Relation rel, double rhs,
                      std::string name = {});
  void add_objective(const LinExpr& expr);
  void add_quadratic(double coef, Var v, double range_hi);

  std::size_t num_vars() const { return vars_.size(); }
  std::size_t num_binaries() const { return num_binaries_; }
  const VarInfo& var(Var v) const { return vars_.at(v.index); }
  const std::vector<VarInfo>& vars() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const LinExpr& linear_objective() const { return objective_; }
  const std::vector<QuadTerm>& quadratic_objective() const { return quad_; }

  double objective_value(std::span<const double> values) const;

  // First violated bound, integrality or constraint condition, if any.
  // Row violations are measured against eps_feas * max(1, |rhs|).
  std::optional<std::string> find_violation(std::span<const double> values,
                                            double eps_feas = kFeasTol,
                                            double eps_int = kIntTol) const;

 private:
  void check_var(Var v) const;

  std::vector<VarInfo> vars_;
  std::size_t num_binaries_ = 0;
  std::vector<Constraint> constraints_;
  LinExpr objective_;
  std::vector<QuadTerm> quad_;
};

enum class SolveStatus { kOptimal, kInfeasible, kLimit };

const char* to_string(SolveStatus s);

struct Solution {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<double> values;  // feasible point; empty when none is known
  double objective = 0.0;      // true objective re-evaluated in-process
  long nodes_explored = 0;
  std::optional<double> reported_objective;  // as printed by the backend

  bool has_values() const { return status == SolveStatus::kOptimal || !values.empty(); }
  double value(Var v) const { return values.at(v.index); }
  bool is_one(Var v) const { return values.at(v.index) > 0.5; }
};

struct Limits {
  double time_limit_s = 300.0;
  // Guard for solve_exact. The toy coordinator run with three accepted
  // segregation rules needs ~35 binaries per layer.
  std::size_t max_exact_binaries = 64;
};

// Any solver that turns a Model into a Solution.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual Solution solve(const Model& model, const Limits& limits) const = 0;
  virtual std::string name() const = 0;
};

}  // namespace docsdn::opt
