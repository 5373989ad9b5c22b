#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "momatch/kahan.hpp"
#include "momatch/multi_index.hpp"

namespace momatch {

// Explicit finite-support law: distinct atoms with probabilities summing to 1.
class FiniteDistribution {
 public:
  FiniteDistribution(std::vector<Point> support, std::vector<double> probs);

  // Clamps entries in [-tol, 0) to zero, drops zero atoms, and renormalizes.
  // Used for LP outputs, whose weights satisfy the simplex only to solver
  // tolerance.
  static FiniteDistribution from_weights(std::vector<Point> support,
                                         std::vector<double> weights,
                                         double tol = 1e-9);
  static FiniteDistribution uniform(std::vector<Point> support);
  static FiniteDistribution point_mass(Point x);

  std::size_t dimension() const { return support_.front().size(); }
  std::size_t size() const { return support_.size(); }
  const std::vector<Point>& support() const { return support_; }
  const std::vector<double>& probs() const { return probs_; }

  // E[g(X)] with compensated summation.
  template <class F>
  double expectation(F&& g) const;

 private:
  std::vector<Point> support_;
  std::vector<double> probs_;
};

// x = A x + b.
struct AffineMap {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd shift;

  Point apply(std::span<const double> x) const;
};

class DistributionSpec;

struct StandardGaussian { std::size_t n; };
struct UniformBall { std::size_t n; };
// Continuous uniform on [-1, 1]^n.
struct UniformCube { std::size_t n; };
// i.i.d. Laplace(0, scale) coordinates.
struct LaplaceProduct { std::size_t n; double scale = 1.0; };
// Uniform on {-1, +1}^n.
struct RademacherCube { std::size_t n; };
struct FiniteSupport { std::shared_ptr<const FiniteDistribution> dist; };
// Output of kwise_construct, kept with the parameters that produced it.
struct KWise {
  std::size_t n;
  int k;
  std::uint64_t seed;
  std::shared_ptr<const FiniteDistribution> dist;
};
// X + Z with Z ~ N(0, noise_cov) independent of X ~ inner.
struct Smoothed {
  std::shared_ptr<const DistributionSpec> inner;
  double sigma;
  Eigen::MatrixXd noise_cov;
  Eigen::MatrixXd noise_factor;  // L with L L^T = noise_cov
  bool explicit_cov;
};

class DistributionSpec {
 public:
  using Variant = std::variant<StandardGaussian, UniformBall, UniformCube,
                               LaplaceProduct, RademacherCube, FiniteSupport,
                               KWise, Smoothed>;

  static DistributionSpec gaussian(std::size_t n);
  static DistributionSpec uniform_ball(std::size_t n);
  static DistributionSpec uniform_cube(std::size_t n);
  static DistributionSpec laplace(std::size_t n, double scale = 1.0);
  static DistributionSpec rademacher(std::size_t n);
  static DistributionSpec finite(FiniteDistribution dist);
  static DistributionSpec kwise(std::size_t n, int k, std::uint64_t seed);

  const Variant& variant() const { return v_; }
  std::size_t dimension() const;
  std::string name() const;

  Eigen::VectorXd mean() const;
  Eigen::MatrixXd covariance() const;

 private:
  explicit DistributionSpec(Variant v) : v_(std::move(v)) {}
  friend DistributionSpec smooth(const DistributionSpec&, double,
                                 std::optional<Eigen::MatrixXd>);
  Variant v_;
};

// Wraps `spec` so samples are X + Z, Z ~ N(0, Sigma). Without an explicit
// Sigma, Sigma = sigma * cov(X), which must be positive definite. An explicit
// Sigma must be symmetric PSD with Sigma - sigma * cov(X) PSD.
DistributionSpec smooth(const DistributionSpec& spec, double sigma,
                        std::optional<Eigen::MatrixXd> noise_cov = std::nullopt);

// `count` draws; a pure function of (spec, seed, count).
std::vector<Point> sample(const DistributionSpec& spec, std::uint64_t seed,
                          std::size_t count);

struct Isotropization {
  AffineMap map;
  std::vector<Point> points;
};

// Whitens a sample with the symmetric inverse square root of its empirical
// covariance. Throws when the covariance condition number exceeds 1e12.
Isotropization isotropize(const std::vector<Point>& points);

// The cube point with x_j = +1 iff bit j of `bits` is set.
Point cube_point(std::uint64_t bits, std::size_t n);

// max |E[prod_{i in S} X_i]| over 1 <= |S| <= k, by enumeration of the
// support. Zero for a k-wise independent distribution.
double max_parity_bias(const FiniteDistribution& dist, int k);

// A distribution on {-1,+1}^n matching all uniform moments of order <= k:
// a vertex of the moment-matching polytope chosen by a seeded linear
// objective. k = n returns the (unique) uniform distribution.
FiniteDistribution kwise_construct(std::size_t n, int k, std::uint64_t seed);

template <class F>
double FiniteDistribution::expectation(F&& g) const {
  KahanSum sum;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    sum += probs_[i] * g(support_[i]);
  }
  return sum.value();
}

}  // namespace momatch
