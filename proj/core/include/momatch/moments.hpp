#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "momatch/distributions.hpp"
#include "momatch/multi_index.hpp"
#include "momatch/rng.hpp"

namespace momatch {

// sigma_I = E[x(I)] over a graded-lex sorted index set containing the zero
// index. The usual set is I(k, n); multilinear subsets are used on the cube.
class MomentVector {
 public:
  MomentVector(std::size_t n, int k, std::vector<MultiIndex> indices,
               std::vector<double> values);

  std::size_t dimension() const { return n_; }
  int order() const { return k_; }
  std::size_t size() const { return indices_.size(); }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  const std::vector<double>& values() const { return values_; }

  // Throws std::out_of_range for an index outside the set.
  double at(const MultiIndex& index) const;
  bool contains(const MultiIndex& index) const;

 private:
  std::size_t n_;
  int k_;
  std::vector<MultiIndex> indices_;
  std::vector<double> values_;
};

MomentVector empirical_moments(const std::vector<Point>& points, int k);
MomentVector empirical_moments(const std::vector<Point>& points,
                               std::vector<MultiIndex> indices);

// Closed forms for the product families and the uniform ball, direct sums
// for finite laws, Gaussian convolution for smoothed laws.
MomentVector exact_moments(const DistributionSpec& spec, int k);
MomentVector exact_moments(const DistributionSpec& spec,
                           std::vector<MultiIndex> indices);

// Uniform-cube moments over the multilinear indices of order <= k: 1 on the
// empty set, 0 elsewhere.
MomentVector uniform_cube_parities(std::size_t n, int k);

// Empirical E[|<w, x>|^r] for unit w and 1 <= r <= 12.
double directional_moment(const std::vector<Point>& points,
                          std::span<const double> w, int r);

// E[<w, X>^a] for a = 0..r, exactly. Odd orders included.
std::vector<double> exact_directional_moments(const DistributionSpec& spec,
                                              std::span<const double> w, int r);

struct BetaProfile {
  std::vector<int> j;
  std::vector<double> mu_2j;  // max over directions of E[<w, X>^{2j}]
  std::vector<double> beta;   // beta[j-1] = sum_{i <= j} mu_2i^{-1/(2i)}
  double mu2_root = 0.0;      // mu_2^{1/2}
};

// Sample route, k <= 20. A finite direction set lower-bounds the supremum
// over the unit ball.
BetaProfile beta_profile(const std::vector<Point>& points,
                         const std::vector<Point>& directions, int k);
// Exact route through exact_directional_moments.
BetaProfile beta_profile(const DistributionSpec& spec,
                         const std::vector<Point>& directions, int k);

// `base` (normalized) followed by `random_count` uniform random unit vectors.
std::vector<Point> probe_directions(std::vector<Point> base, std::size_t n,
                                    std::size_t random_count, std::uint64_t seed);

// Uniform random unit vector in R^n.
Point random_unit_vector(std::size_t n, Rng& rng);

}  // namespace momatch
