#pragma once

#include <utility>
#include <vector>

#include "docsdn/optimkit/model.hpp"

// Dense bounded-variable primal simplex. Sized for the oracle backend's
// small relaxations, not for production models.
namespace docsdn::opt::lp {

struct Row {
  std::vector<std::pair<int, double>> coefs;
  Relation rel;
  double rhs;
};

struct Problem {
  std::vector<double> cost;
  std::vector<double> lo;  // may be -inf
  std::vector<double> hi;  // may be +inf
  std::vector<Row> rows;
};

enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct Result {
  Status status = Status::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
};

Result solve(const Problem& problem);

}  // namespace docsdn::opt::lp
