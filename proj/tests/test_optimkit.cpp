#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>

#include "docsdn/optimkit/exact.hpp"
#include "docsdn/optimkit/external.hpp"
#include "docsdn/optimkit/gadgets.hpp"
#include "docsdn/optimkit/lp_format.hpp"
#include "docsdn/optimkit/simplex.hpp"

using namespace docsdn::opt;

namespace {

// Enumerates every binary assignment of a pure-binary model.
std::optional<double> brute_force_binary(const Model& m) {
  const int n = static_cast<int>(m.num_vars());
  std::optional<double> best;
  std::vector<double> x(n);
  for (long mask = 0; mask < (1L << n); ++mask) {
    for (int j = 0; j < n; ++j) x[j] = (mask >> j) & 1;
    if (m.find_violation(x)) continue;
    const double v = m.objective_value(x);
    if (!best || v < *best) best = v;
  }
  return best;
}

bool have_scip() {
  return std::system("python3 -c 'import pyscipopt' >/dev/null 2>&1") == 0;
}
bool have_highs() {
  return std::system("python3 -c 'import highspy' >/dev/null 2>&1") == 0;
}

// Forces each input to the given value and returns the value of y.
template <typename AddGadget>
std::optional<double> gadget_output(int n, long mask, AddGadget add) {
  Model m;
  std::vector<Var> xs;
  for (int i = 0; i < n; ++i) xs.push_back(m.add_binary("x" + std::to_string(i)));
  const Var y = m.add_binary("y");
  add(m, y, xs);
  for (int i = 0; i < n; ++i) {
    m.add_constraint(LinExpr(xs[i]), Relation::kEq, (mask >> i) & 1);
  }
  // Try both values of y; the gadget must admit exactly one.
  std::optional<double> out;
  for (int yv = 0; yv <= 1; ++yv) {
    std::vector<double> vals(n + 1);
    for (int i = 0; i < n; ++i) vals[i] = (mask >> i) & 1;
    vals[n] = yv;
    if (!m.find_violation(vals)) {
      if (out) return std::nullopt;
      out = yv;
    }
  }
  return out;
}

}  // namespace

TEST(Gadgets, OrTruthTable) {
  for (int n = 1; n <= 4; ++n) {
    for (long mask = 0; mask < (1L << n); ++mask) {
      auto y = gadget_output(n, mask, [](Model& m, Var y, std::vector<Var>& xs) {
        add_or(m, y, xs);
      });
      ASSERT_TRUE(y.has_value()) << n << " " << mask;
      EXPECT_EQ(*y, mask != 0 ? 1.0 : 0.0);
    }
  }
}

TEST(Gadgets, AndTruthTable) {
  for (int n = 1; n <= 4; ++n) {
    for (long mask = 0; mask < (1L << n); ++mask) {
      auto y = gadget_output(n, mask, [](Model& m, Var y, std::vector<Var>& xs) {
        add_and(m, y, xs);
      });
      ASSERT_TRUE(y.has_value()) << n << " " << mask;
      EXPECT_EQ(*y, mask == (1L << n) - 1 ? 1.0 : 0.0);
    }
  }
}

TEST(Gadgets, MinSelectPicksMinimum) {
  const std::vector<std::vector<double>> cases = {
      {0.5, 0.75, 1.0}, {0.3}, {1.0, 1.0}, {0.9, 0.2, 0.6, 0.4}};
  for (const auto& vals : cases) {
    Model m;
    const Var r = m.add_continuous(0, 1, "r");
    std::vector<LinExpr> terms;
    for (double v : vals) terms.emplace_back(v);
    add_min_select(m, r, terms);
    m.add_objective(LinExpr(r));
    const Solution s = solve_exact(m);
    ASSERT_EQ(s.status, SolveStatus::kOptimal);
    EXPECT_NEAR(s.value(r), *std::min_element(vals.begin(), vals.end()), 1e-9);
  }
}

TEST(Gadgets, IndicatorBounds) {
  Model m;
  const Var x = m.add_binary("x");
  const Var f = m.add_continuous(0, 10, "f");
  add_indicator_lb(m, x, f, 1.0, 5.0);
  EXPECT_FALSE(m.find_violation(std::vector<double>{0, 0}));
  EXPECT_TRUE(m.find_violation(std::vector<double>{0, 0.5}));
  EXPECT_TRUE(m.find_violation(std::vector<double>{1, 0.5}));
  EXPECT_FALSE(m.find_violation(std::vector<double>{1, 5}));
  EXPECT_TRUE(m.find_violation(std::vector<double>{1, 6}));
  EXPECT_THROW(add_indicator_lb(m, x, f, 2.0, 1.0), OptError);
  EXPECT_THROW(add_indicator_lb(m, f, x, 0.0, 1.0), OptError);
}

TEST(Simplex, SmallLp) {
  // max x + y s.t. x + 2y <= 4, 3x + y <= 6, x, y >= 0 -> (1.6, 1.2).
  lp::Problem p;
  p.cost = {-1, -1};
  p.lo = {0, 0};
  p.hi = {INFINITY, INFINITY};
  p.rows.push_back({{{0, 1}, {1, 2}}, Relation::kLe, 4});
  p.rows.push_back({{{0, 3}, {1, 1}}, Relation::kLe, 6});
  const auto r = lp::solve(p);
  ASSERT_EQ(r.status, lp::Status::kOptimal);
  EXPECT_NEAR(r.x[0], 1.6, 1e-9);
  EXPECT_NEAR(r.x[1], 1.2, 1e-9);
}

TEST(Simplex, InfeasibleAndUnbounded) {
  lp::Problem p;
  p.cost = {1};
  p.lo = {0};
  p.hi = {INFINITY};
  p.rows.push_back({{{0, 1}}, Relation::kGe, 2});
  p.rows.push_back({{{0, 1}}, Relation::kLe, 1});
  EXPECT_EQ(lp::solve(p).status, lp::Status::kInfeasible);

  lp::Problem q;
  q.cost = {-1};
  q.lo = {0};
  q.hi = {INFINITY};
  q.rows.push_back({{{0, 1}}, Relation::kGe, 2});
  EXPECT_EQ(lp::solve(q).status, lp::Status::kUnbounded);
}

TEST(Exact, ContradictoryBoundsInfeasible) {
  Model m;
  const Var x = m.add_binary("x");
  m.add_constraint(LinExpr(x), Relation::kGe, 1);
  m.add_constraint(LinExpr(x), Relation::kLe, 0);
  EXPECT_EQ(solve_exact(m).status, SolveStatus::kInfeasible);
}

TEST(Exact, UnconstrainedQuadraticAtZero) {
  Model m;
  const Var l = m.add_continuous(0, INFINITY, "load");
  m.add_quadratic(1.0, l, 10.0);
  const Solution s = solve_exact(m);
  ASSERT_EQ(s.status, SolveStatus::kOptimal);
  EXPECT_NEAR(s.value(l), 0.0, 1e-9);
  EXPECT_NEAR(s.objective, 0.0, 1e-12);
}

TEST(Exact, QuadraticInteriorOptimum) {
  // min x^2 - 3x on [0, 10] -> x = 1.5, obj = -2.25.
  Model m;
  const Var x = m.add_continuous(0, 10, "x");
  m.add_objective(LinExpr(x) * -3.0);
  m.add_quadratic(1.0, x, 10.0);
  const Solution s = solve_exact(m);
  ASSERT_EQ(s.status, SolveStatus::kOptimal);
  EXPECT_NEAR(s.value(x), 1.5, 1e-5);
  EXPECT_NEAR(s.objective, -2.25, 1e-9);
}

TEST(Exact, GuardRejectsLargeModels) {
  Model m;
  for (int i = 0; i < 5; ++i) m.add_binary("b" + std::to_string(i));
  Limits lim;
  lim.max_exact_binaries = 4;
  EXPECT_THROW(solve_exact(m, lim), GuardExceeded);
}

TEST(Exact, MatchesBruteForceOnRandomBinaryPrograms) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coef(-5, 5);
  for (int trial = 0; trial < 60; ++trial) {
    Model m;
    const int n = 3 + trial % 8;
    std::vector<Var> xs;
    for (int j = 0; j < n; ++j) xs.push_back(m.add_binary("x" + std::to_string(j)));
    LinExpr obj;
    for (auto x : xs) obj.add(coef(rng), x);
    m.add_objective(obj);
    const int rows = 1 + trial % 4;
    for (int i = 0; i < rows; ++i) {
      LinExpr e;
      for (auto x : xs) e.add(coef(rng), x);
      m.add_constraint(e, i % 2 ? Relation::kGe : Relation::kLe, coef(rng));
    }
    const auto oracle = brute_force_binary(m);
    const Solution s = solve_exact(m);
    if (!oracle) {
      EXPECT_EQ(s.status, SolveStatus::kInfeasible) << trial;
    } else {
      ASSERT_EQ(s.status, SolveStatus::kOptimal) << trial;
      EXPECT_NEAR(s.objective, *oracle, 1e-9) << trial;
      EXPECT_FALSE(m.find_violation(s.values)) << trial;
    }
  }
}

TEST(LpFormat, WritesSectionsAndPiecewiseBound) {
  Model m;
  const Var b = m.add_binary("fw(S1)");
  const Var l = m.add_continuous(0, INFINITY, "load S1");
  m.add_constraint(LinExpr(l) - LinExpr(b) * 2.0, Relation::kLe, 0);
  m.add_objective(LinExpr(b) * 3.0);
  m.add_quadratic(0.5, l, 4.0);
  const auto nat = write_lp(m, QuadMode::kNative);
  EXPECT_NE(nat.text.find("Minimize"), std::string::npos);
  EXPECT_NE(nat.text.find("^2 ] / 2"), std::string::npos);
  EXPECT_NE(nat.text.find("Binaries"), std::string::npos);
  EXPECT_EQ(nat.names[0], "v0_fw_S1_");
  const auto pw = write_lp(m, QuadMode::kPiecewise, 4);
  EXPECT_EQ(pw.text.find("^2"), std::string::npos);
  EXPECT_NEAR(pw.piecewise_error_bound, 0.5 * 1.0 * 1.0 / 4.0, 1e-15);
}

TEST(LpFormat, ParsesPlainAndCbc) {
  auto p = parse_solution("status optimal\nobjective 2.5\nv0_a 1\nv1_b 0.5\n", "plain");
  EXPECT_EQ(p.status, SolveStatus::kOptimal);
  EXPECT_DOUBLE_EQ(*p.objective, 2.5);
  EXPECT_DOUBLE_EQ(p.values.at("v1_b"), 0.5);

  auto c = parse_solution(
      "Optimal - objective value 3.00000000\n"
      "      0 v0_a                   1                       0\n"
      "**    1 v1_b                   2                       0\n",
      "cbc");
  EXPECT_EQ(c.status, SolveStatus::kOptimal);
  EXPECT_DOUBLE_EQ(*c.objective, 3.0);
  EXPECT_DOUBLE_EQ(c.values.at("v1_b"), 2.0);

  EXPECT_EQ(parse_solution("Infeasible - objective value 0\n", "cbc").status,
            SolveStatus::kInfeasible);
  EXPECT_THROW(parse_solution("v0 1\n", "plain"), OptError);
  EXPECT_THROW(parse_solution("", "xml"), OptError);
}

TEST(External, MissingSolverIsReported) {
  Model m;
  const Var x = m.add_binary("x");
  m.add_objective(LinExpr(x));
  ExternalSolverConfig cfg;
  cfg.command = "definitely-not-a-solver-xyz {model} {solution}";
  EXPECT_THROW(solve_external(m, cfg), SolverError);
}

TEST(External, BogusPointFailsReverification) {
  Model m;
  const Var x = m.add_binary("x");
  m.add_constraint(LinExpr(x), Relation::kGe, 1);
  ExternalSolverConfig cfg;
  cfg.command = "printf 'status optimal\\nv0_x 0\\n' > {solution}";
  EXPECT_THROW(solve_external(m, cfg), SolverError);
}

// Random MIQPs: the exact backend against SCIP's native quadratic solve,
// and against HiGHS on the piecewise export within its error bound.
TEST(External, RandomMiqpAgreesWithExact) {
  if (!have_scip() || !have_highs()) GTEST_SKIP() << "python solvers unavailable";
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto scip = preset_solver("scip");
  auto highs = preset_solver("highs");
  for (int trial = 0; trial < 12; ++trial) {
    Model m;
    const int nb = 2 + trial % 4;
    std::vector<Var> bs;
    for (int j = 0; j < nb; ++j) bs.push_back(m.add_binary("b" + std::to_string(j)));
    const Var l1 = m.add_continuous(0, INFINITY, "l1");
    const Var l2 = m.add_continuous(0, INFINITY, "l2");
    // Demand D routed through l1/l2; each needs an open facility.
    const double demand = 1.0 + 4.0 * u(rng);
    m.add_constraint(LinExpr(l1) + LinExpr(l2), Relation::kEq, demand);
    LinExpr open1, open2;
    for (int j = 0; j < nb; ++j) (j % 2 ? open2 : open1).add(demand, bs[j]);
    m.add_constraint(LinExpr(l1) - open1, Relation::kLe, 0);
    m.add_constraint(LinExpr(l2) - open2, Relation::kLe, 0);
    LinExpr obj;
    for (auto b : bs) obj.add(0.5 + 3.0 * u(rng), b);
    m.add_objective(obj);
    m.add_quadratic(0.2 + u(rng), l1, demand);
    m.add_quadratic(0.2 + u(rng), l2, demand);

    const Solution ex = solve_exact(m);
    ASSERT_EQ(ex.status, SolveStatus::kOptimal);
    const Solution sc = solve_external(m, scip);
    ASSERT_EQ(sc.status, SolveStatus::kOptimal);
    EXPECT_NEAR(ex.objective, sc.objective, 1e-6 * std::max(1.0, std::abs(ex.objective)))
        << trial;

    const double bound = write_lp(m, QuadMode::kPiecewise, highs.pieces).piecewise_error_bound;
    const Solution hp = solve_external(m, highs);
    ASSERT_EQ(hp.status, SolveStatus::kOptimal);
    EXPECT_GE(hp.objective, ex.objective - 1e-7) << trial;
    EXPECT_LE(hp.objective, ex.objective + bound + 1e-7) << trial;
  }
}

TEST(External, CbcAdapterRoundTrip) {
  const auto cfg = preset_solver("cbc");
  const std::string bin = cfg.command.substr(0, cfg.command.find(' '));
  if (!std::filesystem::exists(bin)) GTEST_SKIP() << "cbc binary unavailable";
  Model m;
  const Var a = m.add_binary("a");
  const Var b = m.add_binary("b");
  m.add_constraint(LinExpr(a) + LinExpr(b), Relation::kGe, 1);
  m.add_objective(LinExpr(a) * 2.0 + LinExpr(b) * 3.0);
  const Solution s = solve_external(m, cfg);
  ASSERT_EQ(s.status, SolveStatus::kOptimal);
  EXPECT_DOUBLE_EQ(s.objective, 2.0);
  EXPECT_TRUE(s.is_one(a));
}
