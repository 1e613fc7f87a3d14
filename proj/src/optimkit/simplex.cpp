#include "docsdn/optimkit/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace docsdn::opt::lp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kDegenerateStreak = 40;

class Simplex {
 public:
  explicit Simplex(const Problem& p);
  Result run();

 private:
  enum class Outcome { kOptimal, kUnbounded, kIterationLimit };

  double& at(int i, int j) { return tab_[static_cast<std::size_t>(i) * ncols_ + j]; }
  double at(int i, int j) const {
    return tab_[static_cast<std::size_t>(i) * ncols_ + j];
  }
  bool is_fixed(int j) const { return hi_[j] - lo_[j] <= 0.0; }

  Outcome iterate(const std::vector<double>& cost);
  void pivot(int r, int j);
  void drive_out_artificials();

  const Problem& p_;
  int m_ = 0;
  int n_ = 0;
  int ncols_ = 0;
  int first_art_ = 0;
  std::vector<double> tab_;
  std::vector<double> lo_, hi_, x_;
  std::vector<int> basis_;
  std::vector<int> row_of_;
  int iterations_ = 0;
  int max_iterations_ = 0;
};

Simplex::Simplex(const Problem& p) : p_(p) {
  m_ = static_cast<int>(p.rows.size());
  n_ = static_cast<int>(p.cost.size());
  int ns = 0;
  for (const auto& r : p.rows) ns += (r.rel != Relation::kEq);
  first_art_ = n_ + ns;
  ncols_ = n_ + ns + m_;
  tab_.assign(static_cast<std::size_t>(m_) * ncols_, 0.0);
  lo_.assign(ncols_, 0.0);
  hi_.assign(ncols_, 0.0);
  x_.assign(ncols_, 0.0);
  basis_.assign(m_, -1);
  row_of_.assign(ncols_, -1);
  max_iterations_ = 100 * (m_ + ncols_) + 1000;

  for (int j = 0; j < n_; ++j) {
    lo_[j] = p.lo[j];
    hi_[j] = p.hi[j];
    if (std::isfinite(lo_[j])) {
      x_[j] = lo_[j];
    } else if (std::isfinite(hi_[j])) {
      x_[j] = hi_[j];
    } else {
      x_[j] = 0.0;
    }
  }

  int slack = n_;
  for (int i = 0; i < m_; ++i) {
    const Row& row = p.rows[i];
    double resid = row.rhs;
    for (const auto& [j, a] : row.coefs) {
      at(i, j) += a;
      resid -= a * x_[j];
    }
    int slack_col = -1;
    if (row.rel != Relation::kEq) {
      slack_col = slack++;
      at(i, slack_col) = row.rel == Relation::kLe ? 1.0 : -1.0;
      lo_[slack_col] = 0.0;
      hi_[slack_col] = kInf;
    }
    const int art = first_art_ + i;
    int basic = -1;
    double sign = 1.0;
    if (row.rel == Relation::kLe && resid >= 0.0) {
      basic = slack_col;
      sign = 1.0;
    } else if (row.rel == Relation::kGe && resid <= 0.0) {
      basic = slack_col;
      sign = -1.0;
    } else {
      sign = resid >= 0.0 ? 1.0 : -1.0;
      at(i, art) = sign;
      hi_[art] = kInf;
      basic = art;
    }
    if (sign < 0.0) {
      for (int j = 0; j < ncols_; ++j) at(i, j) = -at(i, j);
    }
    basis_[i] = basic;
    row_of_[basic] = i;
    x_[basic] = sign * resid;
  }
}

void Simplex::pivot(int r, int j) {
  const double piv = at(r, j);
  double* rowr = &tab_[static_cast<std::size_t>(r) * ncols_];
  for (int k = 0; k < ncols_; ++k) rowr[k] /= piv;
  rowr[j] = 1.0;
  for (int i = 0; i < m_; ++i) {
    if (i == r) continue;
    double* rowi = &tab_[static_cast<std::size_t>(i) * ncols_];
    const double f = rowi[j];
    if (f == 0.0) continue;
    for (int k = 0; k < ncols_; ++k) {
      if (rowr[k] != 0.0) rowi[k] -= f * rowr[k];
    }
    rowi[j] = 0.0;
  }
  row_of_[basis_[r]] = -1;
  basis_[r] = j;
  row_of_[j] = r;
}

Simplex::Outcome Simplex::iterate(const std::vector<double>& cost) {
  int degenerate = 0;
  std::vector<double> d(ncols_);
  while (true) {
    if (++iterations_ > max_iterations_) return Outcome::kIterationLimit;
    const bool bland = degenerate > kDegenerateStreak;

    // Reduced costs of nonbasic columns.
    for (int j = 0; j < ncols_; ++j) d[j] = cost[j];
    for (int i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      const double* rowi = &tab_[static_cast<std::size_t>(i) * ncols_];
      for (int j = 0; j < ncols_; ++j) d[j] -= cb * rowi[j];
    }

    int enter = -1;
    double enter_dir = 0.0;
    double best = 0.0;
    for (int j = 0; j < ncols_; ++j) {
      if (row_of_[j] >= 0 || is_fixed(j)) continue;
      const bool can_up = x_[j] < hi_[j];
      const bool can_down = x_[j] > lo_[j];
      double gain = 0.0;
      double dir = 0.0;
      if (can_up && d[j] < -kCostTol) {
        gain = -d[j];
        dir = 1.0;
      } else if (can_down && d[j] > kCostTol) {
        gain = d[j];
        dir = -1.0;
      }
      if (dir == 0.0) continue;
      if (bland) {
        enter = j;
        enter_dir = dir;
        break;
      }
      if (gain > best) {
        best = gain;
        enter = j;
        enter_dir = dir;
      }
    }
    if (enter < 0) return Outcome::kOptimal;

    // Ratio test.
    double theta = kInf;
    int leave = -1;
    double leave_alpha = 0.0;
    if (std::isfinite(hi_[enter]) && std::isfinite(lo_[enter])) {
      theta = hi_[enter] - lo_[enter];
    }
    for (int i = 0; i < m_; ++i) {
      const double alpha = at(i, enter) * enter_dir;
      if (std::abs(alpha) <= kPivotTol) continue;
      const int b = basis_[i];
      double limit = kInf;
      if (alpha > 0.0) {
        if (std::isfinite(lo_[b])) limit = std::max(0.0, x_[b] - lo_[b]) / alpha;
      } else {
        if (std::isfinite(hi_[b])) limit = std::max(0.0, hi_[b] - x_[b]) / -alpha;
      }
      if (!std::isfinite(limit)) continue;
      bool take = false;
      if (limit < theta - 1e-12) {
        take = true;
      } else if (limit <= theta + 1e-12 && leave >= 0) {
        take = bland ? b < basis_[leave] : std::abs(alpha) > std::abs(leave_alpha);
      } else if (limit <= theta + 1e-12 && leave < 0) {
        // Prefer a real pivot over a bound flip of equal length.
        take = true;
      }
      if (take) {
        theta = limit;
        leave = i;
        leave_alpha = alpha;
      }
    }
    if (!std::isfinite(theta)) return Outcome::kUnbounded;

    degenerate = theta <= 1e-12 ? degenerate + 1 : 0;

    x_[enter] += enter_dir * theta;
    for (int i = 0; i < m_; ++i) {
      const double a = at(i, enter);
      if (a != 0.0) x_[basis_[i]] -= enter_dir * a * theta;
    }
    if (leave < 0) {
      // Entering variable moved to its opposite bound.
      x_[enter] = enter_dir > 0 ? hi_[enter] : lo_[enter];
      continue;
    }
    const int out = basis_[leave];
    x_[out] = leave_alpha > 0.0 ? lo_[out] : hi_[out];
    pivot(leave, enter);
  }
}

void Simplex::drive_out_artificials() {
  for (int i = 0; i < m_; ++i) {
    if (basis_[i] < first_art_) continue;
    int best = -1;
    double best_abs = 1e-7;
    for (int j = 0; j < first_art_; ++j) {
      if (row_of_[j] >= 0) continue;
      const double a = std::abs(at(i, j));
      if (a > best_abs) {
        best_abs = a;
        best = j;
      }
    }
    if (best >= 0) pivot(i, best);
  }
  for (int j = first_art_; j < ncols_; ++j) {
    lo_[j] = 0.0;
    hi_[j] = 0.0;
    if (row_of_[j] < 0) x_[j] = 0.0;
  }
}

Result Simplex::run() {
  Result res;
  std::vector<double> cost(ncols_, 0.0);
  bool need_phase1 = false;
  for (int j = first_art_; j < ncols_; ++j) {
    if (hi_[j] > 0.0) {
      cost[j] = 1.0;
      need_phase1 = true;
    }
  }
  if (need_phase1) {
    const Outcome o = iterate(cost);
    if (o == Outcome::kIterationLimit) {
      res.status = Status::kIterationLimit;
      res.iterations = iterations_;
      return res;
    }
    double infeas = 0.0;
    double scale = 1.0;
    for (const auto& r : p_.rows) scale = std::max(scale, std::abs(r.rhs));
    for (int j = first_art_; j < ncols_; ++j) infeas += x_[j];
    if (infeas > 1e-9 * scale) {
      res.status = Status::kInfeasible;
      res.iterations = iterations_;
      return res;
    }
  }
  drive_out_artificials();

  std::fill(cost.begin(), cost.end(), 0.0);
  for (int j = 0; j < n_; ++j) cost[j] = p_.cost[j];
  const Outcome o = iterate(cost);
  res.iterations = iterations_;
  if (o == Outcome::kUnbounded) {
    res.status = Status::kUnbounded;
    return res;
  }
  if (o == Outcome::kIterationLimit) {
    res.status = Status::kIterationLimit;
    return res;
  }
  res.status = Status::kOptimal;
  res.x.assign(x_.begin(), x_.begin() + n_);
  for (int j = 0; j < n_; ++j) {
    // Snap tiny drift back into the box.
    res.x[j] = std::clamp(res.x[j], lo_[j], hi_[j]);
    res.objective += p_.cost[j] * res.x[j];
  }
  return res;
}

}  // namespace

Result solve(const Problem& problem) {
  Simplex s(problem);
  return s.run();
}

}  // namespace docsdn::opt::lp
