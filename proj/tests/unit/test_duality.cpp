#include <gtest/gtest.h>

#include <cmath>

#include "momatch/distributions.hpp"
#include "momatch/duality.hpp"
#include "momatch/errors.hpp"
#include "momatch/halfspace.hpp"
#include "momatch/moments.hpp"
#include "oracles.hpp"

using namespace momatch;

namespace {

struct RandomInstance {
  MomentLPInstance inst;
  std::size_t n;
};

RandomInstance random_instance(Rng& rng, std::size_t size, std::size_t n, int k) {
  std::vector<Point> support(size, Point(n));
  for (auto& x : support) {
    for (auto& v : x) v = rng.normal();
  }
  std::vector<double> w(size);
  for (auto& v : w) v = rng.uniform_open();
  const auto ref = FiniteDistribution::from_weights(support, w);
  const Point dir = random_unit_vector(n, rng);
  const auto f = [&](const Point& x) {
    double s = 0;
    for (std::size_t j = 0; j < n; ++j) s += dir[j] * x[j];
    return to_indicator(sign_of(s));
  };
  return {make_instance(support, ref, k, f), n};
}

// The moment LP written out directly for the vertex-enumeration oracle.
lp::LinearProgram moment_lp(const MomentLPInstance& inst, lp::Sense sense) {
  lp::LinearProgram lp(sense, inst.f);
  for (std::size_t r = 0; r < inst.moments.size(); ++r) {
    std::vector<double> row;
    for (const auto& x : inst.support) row.push_back(oracle::naive_monomial(inst.moments.indices()[r], x));
    lp.add_constraint(row, lp::Relation::kEqual, inst.moments.values()[r]);
  }
  return lp;
}

}  // namespace

TEST(MakeInstance, Validation) {
  const auto m = exact_moments(DistributionSpec::finite(FiniteDistribution({{0.0}, {1.0}}, {0.5, 0.5})), 1);
  EXPECT_NO_THROW(make_instance({{0.0}, {1.0}}, m, {0.0, 1.0}, 0.5));
  EXPECT_THROW(make_instance({{0.0}, {1.0}}, m, {0.0, 0.5}, 0.5), std::invalid_argument);
  EXPECT_THROW(make_instance({{0.0}, {0.0}}, m, {0.0, 1.0}, 0.5), std::invalid_argument);
  EXPECT_THROW(make_instance({{0.0}}, m, {0.0, 1.0}, 0.5), std::invalid_argument);
  EXPECT_THROW(make_instance({{0.0, 1.0}}, m, {1.0}, 0.5), std::invalid_argument);
}

TEST(PrimalWorstCase, MatchesVertexEnumeration) {
  Rng rng(31);
  for (int t = 0; t < 25; ++t) {
    const auto r = random_instance(rng, 3 + rng.below(5), 1 + rng.below(2), 1 + static_cast<int>(rng.below(2)));
    for (auto sense : {lp::Sense::kMaximize, lp::Sense::kMinimize}) {
      const auto wc = primal_worst_case(r.inst, sense);
      const auto oracle_value = oracle::vertex_optimum(moment_lp(r.inst, sense));
      ASSERT_TRUE(oracle_value.has_value());
      EXPECT_NEAR(wc.value, *oracle_value, 1e-8);
      // The returned law matches every moment.
      const auto got = exact_moments(DistributionSpec::finite(wc.distribution), r.inst.moments.indices());
      for (std::size_t i = 0; i < got.size(); ++i) {
        EXPECT_NEAR(got.values()[i], r.inst.moments.values()[i], 1e-8 * (1 + std::abs(got.values()[i])));
      }
    }
  }
}

TEST(PrimalWorstCase, UnrealizableMomentsThrow) {
  const std::vector<MultiIndex> idx = enumerate_multi_indices(2, 1);
  // E[x] = 0, E[x^2] = 4 is impossible on [-1, 1].
  const MomentVector m(1, 2, idx, {1.0, 0.0, 4.0});
  const auto inst = make_instance({{-1.0}, {0.0}, {1.0}}, m, {0.0, 1.0, 1.0}, 0.5);
  EXPECT_THROW(primal_worst_case(inst, lp::Sense::kMaximize), InfeasibleError);
}

TEST(DualSandwich, CertificatesBracketAndMatchPrimal) {
  Rng rng(47);
  for (int t = 0; t < 30; ++t) {
    const auto r = random_instance(rng, 4 + rng.below(30), 1 + rng.below(3), 1 + static_cast<int>(rng.below(3)));
    const auto pair = dual_sandwich(r.inst);
    const double pmax = primal_worst_case(r.inst, lp::Sense::kMaximize).value;
    const double pmin = primal_worst_case(r.inst, lp::Sense::kMinimize).value;
    EXPECT_NEAR(pair.upper_expectation, pmax, 1e-6 * std::max(1.0, std::abs(pmax)));
    EXPECT_NEAR(pair.lower_expectation, pmin, 1e-6 * std::max(1.0, std::abs(pmin)));
    for (std::size_t i = 0; i < r.inst.support.size(); ++i) {
      const auto& x = r.inst.support[i];
      EXPECT_GE(pair.upper(x) - r.inst.f[i], -1e-8);
      EXPECT_GE(r.inst.f[i] - pair.lower(x), -1e-8);
    }
    EXPECT_GE(pair.upper_slack, -1e-8);
    EXPECT_GE(pair.lower_slack, -1e-8);
    EXPECT_NEAR(pair.upper_gap, pmax - r.inst.reference_value, 1e-6);
    EXPECT_NEAR(expectation(pair.upper, r.inst.moments), pair.upper_expectation, 1e-12);
    EXPECT_LE(pmin, r.inst.reference_value + 1e-9);
    EXPECT_GE(pmax, r.inst.reference_value - 1e-9);
  }
}

TEST(DualSandwich, DeterminedMomentsCloseTheGap) {
  // Three atoms on a line are pinned down by moments of order two.
  const auto ref = FiniteDistribution({{-1.0}, {0.5}, {2.0}}, {0.2, 0.5, 0.3});
  const auto inst = make_instance(ref.support(), ref, 2, [](const Point& x) { return x[0] > 0 ? 1.0 : 0.0; });
  const auto pair = dual_sandwich(inst);
  EXPECT_NEAR(pair.primal_max, 0.8, 1e-9);
  EXPECT_NEAR(pair.primal_min, 0.8, 1e-9);
  EXPECT_NEAR(pair.upper_gap, 0.0, 1e-9);
}

TEST(Expectation, RequiresIndicesInTheSet) {
  const auto m = exact_moments(DistributionSpec::gaussian(1), 2);
  Polynomial::Terms t;
  t[MultiIndex({2})] = 3.0;
  t[MultiIndex({0})] = 1.0;
  EXPECT_NEAR(expectation(Polynomial(1, t), m), 4.0, 1e-15);
  t[MultiIndex({3})] = 1.0;
  EXPECT_THROW(expectation(Polynomial(1, t), m), std::out_of_range);
}

TEST(FoolPtf, ProductOfTwoBitsFrozenValues) {
  Polynomial::Terms t;
  t[MultiIndex({1, 1, 0, 0, 0, 0, 0, 0})] = 1.0;
  const Polynomial p(8, t);
  EXPECT_NEAR(fool_ptf(p, 8, 1).worst_gap, 0.5, 1e-9);
  EXPECT_LE(fool_ptf(p, 8, 2).worst_gap, 1e-9);
  EXPECT_LE(fool_ptf(p, 8, 0).worst_gap, 1.0);
  EXPECT_GE(fool_ptf(p, 8, 0).worst_gap, 0.5);
}

TEST(FoolPtf, ProductOfTwoBitsBruteForceOnFourAtoms) {
  // Laws on {-1,1}^2 with uniform marginals, maximizing Pr[x1 x2 >= t].
  std::vector<double> f;
  for (std::uint64_t b = 0; b < 4; ++b) {
    const Point x = cube_point(b, 2);
    f.push_back(x[0] * x[1] >= 0.0 ? 1.0 : 0.0);
  }
  lp::LinearProgram lp(lp::Sense::kMaximize, f);
  lp.add_constraint({1, 1, 1, 1}, lp::Relation::kEqual, 1.0);
  for (std::size_t j = 0; j < 2; ++j) {
    std::vector<double> row;
    for (std::uint64_t b = 0; b < 4; ++b) row.push_back(cube_point(b, 2)[j]);
    lp.add_constraint(row, lp::Relation::kEqual, 0.0);
  }
  const auto best = oracle::vertex_optimum(lp);
  ASSERT_TRUE(best.has_value());
  EXPECT_NEAR(*best - 0.5, 0.5, 1e-12);
}

TEST(FoolPtf, GapShrinksWithIndependenceAndVanishesAtFull) {
  Polynomial::Terms t;
  t[MultiIndex({1, 0, 0, 0, 0})] = 1.0;
  t[MultiIndex({0, 1, 0, 0, 0})] = 0.8;
  t[MultiIndex({0, 0, 1, 0, 0})] = -0.6;
  t[MultiIndex({0, 0, 0, 1, 1})] = 0.5;
  t[MultiIndex({1, 0, 1, 0, 0})] = 0.3;
  const Polynomial p(5, t);
  double previous = 1.0;
  for (int k = 1; k <= 5; ++k) {
    const auto r = fool_ptf(p, 5, k);
    EXPECT_LE(r.worst_gap, previous + 1e-9);
    previous = r.worst_gap;
    for (const auto& row : r.rows) {
      EXPECT_LE(row.min_probability, row.uniform_probability + 1e-9);
      EXPECT_GE(row.max_probability, row.uniform_probability - 1e-9);
    }
  }
  EXPECT_LE(previous, 1e-9);
}

TEST(FoolPtf, Preconditions) {
  Polynomial::Terms cubic;
  cubic[MultiIndex({1, 1, 1})] = 1.0;
  EXPECT_THROW(fool_ptf(Polynomial(3, cubic), 3, 1), std::invalid_argument);
  EXPECT_THROW(fool_ptf(Polynomial::constant(13, 1.0), 13, 1), std::invalid_argument);
  EXPECT_THROW(fool_ptf(Polynomial::constant(3, 1.0), 3, 4), std::invalid_argument);
}

TEST(Hypercontractivity, FrozenSumOfTwoBits) {
  Polynomial::Terms t;
  t[MultiIndex({1, 0})] = 1.0;
  t[MultiIndex({0, 1})] = 1.0;
  const auto r = hypercontractivity_check(Polynomial(2, t), 2);
  EXPECT_NEAR(r.lhs, 1.681792830507429, 1e-14);
  EXPECT_NEAR(r.rhs, 2.4494897427831783, 1e-14);
  EXPECT_EQ(r.degree, 1);
  EXPECT_TRUE(r.holds);
  EXPECT_THROW(hypercontractivity_check(Polynomial(2), 2), std::invalid_argument);
}
