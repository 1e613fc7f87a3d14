#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "docsdn/optimkit/model.hpp"

namespace docsdn::opt {

enum class QuadMode { kNative, kPiecewise };

struct LpExport {
  std::string text;
  std::vector<std::string> names;  // LP column name per model variable
  // Worst-case under-estimate of the objective introduced by piecewise
  // export: sum over quadratic terms of coef * (width / pieces)^2 / 4.
  double piecewise_error_bound = 0.0;
};

// CPLEX LP dialect. In native mode the quadratic objective is emitted in
// "[ ... ] / 2" form; in piecewise mode each coef*x^2 becomes coef*w with
// w >= 2*b*x - b^2 at pieces+1 evenly spaced breakpoints b on [lo, range_hi].
LpExport write_lp(const Model& model, QuadMode mode, int pieces = 8);

// Column name used for variable `index` with diagnostic name `name`.
std::string lp_column_name(int index, std::string_view name);

struct ParsedSolution {
  SolveStatus status = SolveStatus::kInfeasible;
  bool has_point = false;
  std::optional<double> objective;
  std::map<std::string, double> values;
};

// Solution-file adapters:
//   "plain": "status <optimal|infeasible|limit>", optional "objective <v>",
//            then "<name> <value>" lines.
//   "cbc":   CBC's `solu` output ("Optimal - objective value v" header,
//            then "<idx> <name> <value> <reduced cost>" lines).
ParsedSolution parse_solution(std::string_view text, std::string_view format);

}  // namespace docsdn::opt
