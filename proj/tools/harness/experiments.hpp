#pragma once

#include "harness/config.hpp"
#include "harness/report.hpp"
#include "momatch/distributions.hpp"
#include "momatch/polynomial.hpp"
#include "momatch/rng.hpp"

namespace momatch::harness {

// The configured law: base family, then smoothing when smoothing_sigma > 0
// (noise covariance noise_variance * I when given).
DistributionSpec make_distribution(const ExperimentConfig& config);

// Multilinear degree-2 polynomial with N(0, 1) linear and N(0, 1/4) pairwise
// coefficients, redrawn until regularity <= max_regularity (when positive).
Polynomial random_quadratic(std::size_t n, double max_regularity, Rng& rng);

// Runs every trial (trial t uses trial_seed(seed, t)) and returns sorted
// cells with summary statistics. Wall-clock is recorded separately.
Report run(const ExperimentConfig& config);

}  // namespace momatch::harness
