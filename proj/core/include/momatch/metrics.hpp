#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "momatch/multi_index.hpp"

namespace momatch {

// Projected samples Y = (<w_1, X>, ..., <w_m, X>), one m-vector per draw.
using EmpiricalVector = std::vector<Point>;

enum class CdfGrid {
  // Sup over the product grid of pooled coordinate values: the exact sup
  // over t in R^m of the empirical orthant-tail difference.
  kExact,
  // Sup over the pooled sample points only. A lower bound when m > 1.
  kPooledPoints,
};

// sup_t |P[X >= t] - P[Y >= t]| with coordinatewise >=. m = 1 uses a sorted
// merge. The exact grid for m > 1 has (|X| + |Y|)^m cells and is capped at
// `max_cells`.
double d_cdf(const EmpiricalVector& x, const EmpiricalVector& y,
             CdfGrid grid = CdfGrid::kExact, std::size_t max_cells = 1u << 22);
double d_cdf(std::span<const double> x, std::span<const double> y);

// Smallest eps with F_X(t - eps) - eps <= F_Y(t) <= F_X(t + eps) + eps for all
// t, F(t) = P[. < t]; bisection to 1e-6 from the feasible value d_cdf.
double d_levy(std::span<const double> x, std::span<const double> y,
              double tolerance = 1e-6);
double d_levy(const EmpiricalVector& x, const EmpiricalVector& y,
              double tolerance = 1e-6);

struct LambdaOptions {
  double t_max = 100.0;
  double t_min = 0.1;
  std::size_t num_t = 64;
  // Frequencies per axis on [-t_max, t_max] (m = 1: [0, t_max], since
  // |phi_X - phi_Y| is even). 0 picks 512 for m = 1 and 4096^{1/m} above.
  // The T ladder is always added, on each axis and the diagonal when m > 1.
  std::size_t points_per_dim = 0;
};

struct LambdaResult {
  double value = 0.0;      // min_T max(D(T), 1/T)
  double best_t = 0.0;     // minimizing T
  double max_char_diff = 0.0;  // max |phi_X - phi_Y| over the grid
  std::size_t grid_points = 0;
};

// Upper estimate of the lambda-metric from a finite frequency grid.
LambdaResult d_lambda(const EmpiricalVector& x, const EmpiricalVector& y,
                      const LambdaOptions& options = {});

// Empirical law of the patterns (sign(v_r - theta_r))_r, bit r set iff +1.
std::vector<double> sign_pattern_distribution(const EmpiricalVector& v,
                                              std::span<const double> theta);

// Total variation between the pattern laws of X and Y at thresholds theta.
double sign_pattern_tv(const EmpiricalVector& x, const EmpiricalVector& y,
                       std::span<const double> theta);

// max over a in {-1,+1}^m of d_cdf(a * X, a * Y), coordinatewise sign flips.
double max_signed_projection_cdf(const EmpiricalVector& x, const EmpiricalVector& y,
                                 CdfGrid grid = CdfGrid::kExact);

struct WindowMass {
  double alpha = 0.0;
  double mass = 0.0;   // sup over window starts of the empirical mass
  double start = 0.0;  // a maximizing start
  std::size_t windows = 0;
};

// For each width alpha, the largest empirical mass of [t, t + alpha] over
// starts t = min + i * alpha / 10 spanning the sample range.
std::vector<WindowMass> anticoncentration_probe(std::span<const double> samples,
                                                std::span<const double> alphas);

}  // namespace momatch
