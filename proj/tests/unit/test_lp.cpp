#include <gtest/gtest.h>

#include <cmath>

#include "momatch/lp.hpp"
#include "momatch/rng.hpp"
#include "oracles.hpp"

using namespace momatch;
using namespace momatch::lp;

namespace {

// Bounded random LP with mixed relations; the box keeps every region compact.
LinearProgram random_mixed(Rng& rng, std::size_t n, std::size_t m) {
  std::vector<double> c(n);
  for (auto& v : c) v = rng.normal();
  LinearProgram lp(rng.uniform() < 0.5 ? Sense::kMinimize : Sense::kMaximize, c);
  // x0 is feasible by construction.
  std::vector<double> x0(n);
  for (auto& v : x0) v = rng.uniform() * 2.0 - 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> a(n);
    double ax = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      a[j] = std::round(rng.normal() * 3.0) / 2.0;
      ax += a[j] * x0[j];
    }
    const double u = rng.uniform();
    if (u < 0.2) {
      lp.add_constraint(a, Relation::kEqual, ax);
    } else if (u < 0.6) {
      lp.add_constraint(a, Relation::kLessEqual, ax + rng.uniform());
    } else {
      lp.add_constraint(a, Relation::kGreaterEqual, ax - rng.uniform());
    }
  }
  for (std::size_t j = 0; j < n; ++j) lp.set_bounds(j, -2.0, 2.0);
  return lp;
}

// Equality rows with boxed columns, the shape routed to the dual method.
LinearProgram random_boxed_equality(Rng& rng, std::size_t n, std::size_t m) {
  std::vector<double> c(n);
  for (auto& v : c) v = rng.uniform() < 0.5 ? 1.0 : -1.0;  // degenerate costs
  LinearProgram lp(Sense::kMaximize, c);
  std::vector<double> x0(n);
  for (auto& v : x0) v = rng.uniform() * 2.0 - 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> a(n);
    double ax = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      a[j] = static_cast<double>(static_cast<int>(rng.below(5)) - 2);
      ax += a[j] * x0[j];
    }
    lp.add_constraint(a, Relation::kEqual, ax);
  }
  for (std::size_t j = 0; j < n; ++j) lp.set_bounds(j, -1.0, 1.0);
  return lp;
}

void expect_dual_consistency(const LinearProgram& lp, const LPSolution& s) {
  for (std::size_t j = 0; j < lp.num_variables(); ++j) {
    double aty = 0.0;
    for (std::size_t i = 0; i < lp.num_constraints(); ++i) aty += lp.row(i)[j] * s.duals[i];
    EXPECT_NEAR(s.reduced_costs[j], lp.objective()[j] - aty, 1e-8);
  }
  EXPECT_NEAR(s.objective, s.dual_objective, 1e-6 * (1 + std::abs(s.objective)));
  EXPECT_LE(s.primal_residual, 1e-9);
}

}  // namespace

TEST(LP, MatchesVertexEnumerationPrimal) {
  Rng rng(2024);
  for (int t = 0; t < 60; ++t) {
    const auto lp = random_mixed(rng, 2 + rng.below(3), 1 + rng.below(4));
    const auto oracle_value = oracle::vertex_optimum(lp);
    ASSERT_TRUE(oracle_value.has_value());
    for (auto rule : {PivotRule::kBland, PivotRule::kDantzig}) {
      SolverOptions o;
      o.rule = rule;
      const auto s = solve(lp, o);
      ASSERT_TRUE(s.optimal()) << s.diagnostics;
      EXPECT_NEAR(s.objective, *oracle_value, 1e-8 * (1 + std::abs(*oracle_value))) << t;
      expect_dual_consistency(lp, s);
    }
  }
}

TEST(LP, DualMethodMatchesVertexEnumerationAndPrimal) {
  Rng rng(99);
  for (int t = 0; t < 60; ++t) {
    const auto lp = random_boxed_equality(rng, 3 + rng.below(4), 1 + rng.below(3));
    const auto oracle_value = oracle::vertex_optimum(lp);
    ASSERT_TRUE(oracle_value.has_value());
    SolverOptions dual;
    dual.algorithm = Algorithm::kDual;
    SolverOptions primal;
    primal.algorithm = Algorithm::kPrimal;
    const auto sd = solve(lp, dual);
    const auto sp = solve(lp, primal);
    ASSERT_TRUE(sd.optimal()) << sd.diagnostics;
    ASSERT_TRUE(sp.optimal()) << sp.diagnostics;
    EXPECT_NEAR(sd.objective, *oracle_value, 1e-8 * (1 + std::abs(*oracle_value)));
    EXPECT_NEAR(sp.objective, *oracle_value, 1e-8 * (1 + std::abs(*oracle_value)));
    expect_dual_consistency(lp, sd);
  }
}

TEST(LP, DetectsInfeasibility) {
  LinearProgram lp(Sense::kMinimize, {1.0, 1.0});
  lp.add_constraint({1.0, 1.0}, Relation::kLessEqual, 1.0);
  lp.add_constraint({1.0, 1.0}, Relation::kGreaterEqual, 2.0);
  EXPECT_EQ(solve(lp).status, Status::kInfeasible);

  LinearProgram boxed(Sense::kMaximize, {1.0, 0.0});
  boxed.add_constraint({1.0, 1.0}, Relation::kEqual, 5.0);
  boxed.set_bounds(0, 0.0, 1.0);
  boxed.set_bounds(1, 0.0, 1.0);
  for (auto a : {Algorithm::kAuto, Algorithm::kDual, Algorithm::kPrimal}) {
    SolverOptions o;
    o.algorithm = a;
    EXPECT_EQ(solve(boxed, o).status, Status::kInfeasible);
  }
}

TEST(LP, DetectsUnboundedness) {
  LinearProgram lp(Sense::kMaximize, {1.0, 1.0});
  lp.add_constraint({1.0, -1.0}, Relation::kLessEqual, 1.0);
  EXPECT_EQ(solve(lp).status, Status::kUnbounded);
}

TEST(LP, BealeCyclingExampleTerminates) {
  // Classic cycling instance for the textbook largest-coefficient rule.
  LinearProgram lp(Sense::kMinimize, {-0.75, 150.0, -0.02, 6.0});
  lp.add_constraint({0.25, -60.0, -0.04, 9.0}, Relation::kLessEqual, 0.0);
  lp.add_constraint({0.5, -90.0, -0.02, 3.0}, Relation::kLessEqual, 0.0);
  lp.add_constraint({0.0, 0.0, 1.0, 0.0}, Relation::kLessEqual, 1.0);
  for (auto rule : {PivotRule::kBland, PivotRule::kDantzig}) {
    SolverOptions o;
    o.rule = rule;
    const auto s = solve(lp, o);
    ASSERT_TRUE(s.optimal());
    EXPECT_NEAR(s.objective, -0.05, 1e-12);
  }
}

TEST(LP, FreeVariablesAndDeterminism) {
  LinearProgram lp(Sense::kMinimize, {1.0, -1.0});
  lp.set_bounds(0, -lp::kInfinity, lp::kInfinity);
  lp.add_constraint({1.0, 1.0}, Relation::kGreaterEqual, -3.0);
  lp.add_constraint({0.0, 1.0}, Relation::kLessEqual, 2.0);
  const auto a = solve(lp);
  const auto b = solve(lp);
  ASSERT_TRUE(a.optimal());
  EXPECT_NEAR(a.objective, -7.0, 1e-12);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(LP, DualRequiresSupportedShape) {
  LinearProgram lp(Sense::kMinimize, {1.0});
  lp.add_constraint({1.0}, Relation::kGreaterEqual, 1.0);
  SolverOptions o;
  o.algorithm = Algorithm::kDual;
  EXPECT_THROW(solve(lp, o), std::invalid_argument);
}

TEST(LP, RejectsMalformedInput) {
  LinearProgram lp(Sense::kMinimize, {1.0, 2.0});
  EXPECT_THROW(lp.add_constraint({1.0}, Relation::kEqual, 1.0), std::invalid_argument);
  EXPECT_THROW(lp.add_constraint({1.0, NAN}, Relation::kEqual, 1.0), std::invalid_argument);
  EXPECT_THROW(lp.set_bounds(0, 2.0, 1.0), std::invalid_argument);
  EXPECT_THROW(lp.set_bounds(5, 0.0, 1.0), std::out_of_range);
}
