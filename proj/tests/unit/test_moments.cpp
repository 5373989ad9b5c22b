#include <gtest/gtest.h>

#include <cmath>

#include "momatch/distributions.hpp"
#include "momatch/moments.hpp"
#include "oracles.hpp"

using namespace momatch;

namespace {

// E[x^e] for the one-dimensional families, computed by numerical quadrature
// of the density on a fine grid.
double quadrature_moment(const std::function<double(double)>& density, double lo, double hi, int e) {
  const int steps = 200000;
  const double h = (hi - lo) / steps;
  double s = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double x = lo + i * h;
    const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
    s += w * std::pow(x, e) * density(x);
  }
  return s * h;
}

}  // namespace

TEST(MomentVector, Validation) {
  const auto idx = enumerate_multi_indices(1, 2);
  EXPECT_NO_THROW(MomentVector(2, 1, idx, {1.0, 0.0, 0.0}));
  EXPECT_THROW(MomentVector(2, 1, idx, {0.9, 0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(MomentVector(2, 1, idx, {1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(MomentVector(2, 1, {idx[1], idx[0], idx[2]}, {0.0, 1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(MomentVector(2, 0, idx, {1.0, 0.0, 0.0}), std::invalid_argument);
  const MomentVector m(2, 1, idx, {1.0, 0.25, -0.5});
  EXPECT_DOUBLE_EQ(m.at(MultiIndex({0, 1})), -0.5);
  EXPECT_THROW(m.at(MultiIndex({1, 1})), std::out_of_range);
}

TEST(ExactMoments, OneDimensionalFamiliesMatchQuadrature) {
  const double pi = std::acos(-1.0);
  const auto gauss = [&](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2 * pi); };
  const auto lap = [](double x) { return 0.5 / 0.7 * std::exp(-std::abs(x) / 0.7); };
  const auto cube = [](double) { return 0.5; };
  const auto g = exact_moments(DistributionSpec::gaussian(1), 8);
  const auto l = exact_moments(DistributionSpec::laplace(1, 0.7), 8);
  const auto c = exact_moments(DistributionSpec::uniform_cube(1), 8);
  for (int e = 0; e <= 8; ++e) {
    const MultiIndex idx({e});
    EXPECT_NEAR(g.at(idx), quadrature_moment(gauss, -14, 14, e), 1e-6 * (1 + g.at(idx))) << e;
    EXPECT_NEAR(l.at(idx), quadrature_moment(lap, -45, 45, e), 1e-4 * (1 + l.at(idx))) << e;
    EXPECT_NEAR(c.at(idx), quadrature_moment(cube, -1, 1, e), 1e-8) << e;
  }
  EXPECT_DOUBLE_EQ(g.at(MultiIndex({8})), 105.0);
}

TEST(ExactMoments, RademacherMatchesEnumeration) {
  const std::size_t n = 3;
  const auto exact = exact_moments(DistributionSpec::rademacher(n), 4);
  std::vector<Point> atoms;
  for (std::uint64_t b = 0; b < 8; ++b) atoms.push_back(cube_point(b, n));
  const auto brute = exact_moments(DistributionSpec::finite(FiniteDistribution::uniform(atoms)), 4);
  for (std::size_t i = 0; i < exact.size(); ++i) EXPECT_NEAR(exact.values()[i], brute.values()[i], 1e-15);
}

TEST(ExactMoments, BallAndSmoothedAgreeWithSampling) {
  const std::vector<DistributionSpec> specs{
      DistributionSpec::uniform_ball(2),
      smooth(DistributionSpec::rademacher(2), 0.4),
      smooth(DistributionSpec::finite(FiniteDistribution({{0.0, 1.0}, {2.0, -1.0}}, {0.25, 0.75})), 0.5,
             Eigen::Matrix2d{{1.0, -0.3}, {-0.3, 0.8}}),
  };
  for (const auto& spec : specs) {
    const auto exact = exact_moments(spec, 4);
    const auto emp = empirical_moments(sample(spec, 8, 400000), 4);
    for (std::size_t i = 0; i < exact.size(); ++i) {
      EXPECT_NEAR(exact.values()[i], emp.values()[i], 0.03 * (1 + std::abs(exact.values()[i])))
          << spec.name() << " index " << i;
    }
  }
}

TEST(EmpiricalMoments, MatchesBruteForce) {
  const auto pts = sample(DistributionSpec::gaussian(2), 1, 500);
  const auto m = empirical_moments(pts, 3);
  for (std::size_t i = 0; i < m.size(); ++i) {
    double s = 0.0;
    for (const auto& p : pts) s += oracle::naive_monomial(m.indices()[i], p);
    EXPECT_NEAR(m.values()[i], s / pts.size(), 1e-12 * (1 + std::abs(s)));
  }
  EXPECT_EQ(m.values()[0], 1.0);
}

TEST(UniformCubeParities, OneThenZeros) {
  const auto m = uniform_cube_parities(4, 2);
  EXPECT_EQ(m.size(), 11u);
  EXPECT_EQ(m.values()[0], 1.0);
  for (std::size_t i = 1; i < m.size(); ++i) EXPECT_EQ(m.values()[i], 0.0);
}

TEST(DirectionalMoments, ExactMatchesEmpirical) {
  const Point w{0.6, 0.8};
  const auto spec = DistributionSpec::laplace(2, 1.0);
  const auto exact = exact_directional_moments(spec, w, 4);
  const auto pts = sample(spec, 3, 400000);
  EXPECT_NEAR(directional_moment(pts, w, 2), exact[2], 0.03 * exact[2]);
  EXPECT_NEAR(directional_moment(pts, w, 4), exact[4], 0.06 * exact[4]);
  EXPECT_NEAR(exact[1], 0.0, 1e-15);
  EXPECT_THROW(directional_moment(pts, Point{1.0, 1.0}, 2), std::invalid_argument);
  EXPECT_THROW(directional_moment(pts, w, 13), std::invalid_argument);
}

TEST(BetaProfile, FrozenGaussianAndLaplaceValues) {
  const std::vector<Point> e1{{1.0}};
  const auto g = beta_profile(DistributionSpec::gaussian(1), e1, 16);
  EXPECT_NEAR(g.beta[15], 7.390095268007176, 1e-12);
  EXPECT_NEAR(g.beta[3], 2.9555310765332927, 1e-12);
  const auto l = beta_profile(DistributionSpec::laplace(1), e1, 16);
  EXPECT_NEAR(l.beta[3], 1.7585820411881254, 1e-12);
  EXPECT_NEAR(l.beta[15], 3.2906881036742015, 1e-12);
  EXPECT_NEAR(l.beta[15] / l.beta[3], 1.8712167113062075, 1e-12);
}

TEST(BetaProfile, IncreasingAndSampleRouteLowerBoundsDirections) {
  const auto spec = DistributionSpec::gaussian(2);
  const auto dirs = probe_directions({{1.0, 0.0}}, 2, 4, 5);
  EXPECT_EQ(dirs.size(), 5u);
  const auto exact = beta_profile(spec, dirs, 6);
  for (std::size_t j = 1; j < exact.beta.size(); ++j) EXPECT_GT(exact.beta[j], exact.beta[j - 1]);
  const auto emp = beta_profile(sample(spec, 2, 200000), dirs, 3);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(emp.beta[j], exact.beta[j], 0.05 * exact.beta[j]);
  EXPECT_THROW(beta_profile(sample(spec, 2, 10), dirs, 21), std::invalid_argument);
}
