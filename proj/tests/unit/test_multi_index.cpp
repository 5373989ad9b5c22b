#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "momatch/multi_index.hpp"
#include "oracles.hpp"

using namespace momatch;

TEST(MultiIndex, GradedLexOrderForTwoVariables) {
  const auto idx = enumerate_multi_indices(2, 2);
  const std::vector<std::vector<int>> expected{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  ASSERT_EQ(idx.size(), expected.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    EXPECT_TRUE(std::equal(expected[i].begin(), expected[i].end(), idx[i].exponents().begin()));
  }
}

TEST(MultiIndex, CountsMatchBinomial) {
  for (std::size_t n = 1; n <= 5; ++n) {
    for (int k = 0; k <= 5; ++k) {
      const auto idx = enumerate_multi_indices(k, n);
      EXPECT_EQ(idx.size(), count_multi_indices(k, n));
      std::set<std::vector<int>> seen;
      for (const auto& m : idx) {
        EXPECT_LE(m.degree(), k);
        seen.insert({m.exponents().begin(), m.exponents().end()});
      }
      EXPECT_EQ(seen.size(), idx.size());
      EXPECT_TRUE(std::is_sorted(idx.begin(), idx.end(), GradedLexLess{}));
    }
  }
  EXPECT_EQ(count_multi_indices(3, 4), 35u);
}

TEST(MultiIndex, MultilinearSubsets) {
  const auto idx = enumerate_multilinear_indices(2, 4);
  EXPECT_EQ(idx.size(), 1u + 4u + 6u);
  for (const auto& m : idx) EXPECT_TRUE(m.is_multilinear());
}

TEST(MultiIndex, FindIndexLocatesEveryEntry) {
  const auto idx = enumerate_multi_indices(3, 3);
  for (std::size_t i = 0; i < idx.size(); ++i) EXPECT_EQ(find_index(idx, idx[i]), i);
  EXPECT_GE(find_index(idx, MultiIndex({4, 0, 0})), idx.size());
}

TEST(MultiIndex, BasisEvaluationMatchesNaiveProducts) {
  const auto idx = enumerate_multi_indices(4, 3);
  MonomialBasis basis(idx);
  const std::vector<double> x{0.7, -1.3, 2.1};
  const auto values = basis.evaluate(x);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    EXPECT_NEAR(values[i], oracle::naive_monomial(idx[i], x), 1e-12 * (1 + std::abs(values[i])));
  }
}

TEST(MultiIndex, RejectsNegativeExponents) {
  EXPECT_THROW(MultiIndex({1, -1}), std::invalid_argument);
}
