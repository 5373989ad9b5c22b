#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "momatch/distributions.hpp"
#include "momatch/lp.hpp"
#include "momatch/moments.hpp"
#include "momatch/polynomial.hpp"

namespace momatch {

// Finite-support moment problem: distributions mu on `support` with
// E_mu[x(I)] = sigma_I for every I in the moment index set, scored by
// E_mu[f] for f: support -> {0, 1}. `reference_value` is E[f] under the law
// that produced sigma.
struct MomentLPInstance {
  std::vector<Point> support;
  MomentVector moments;
  std::vector<double> f;
  double reference_value = 0.0;
};

// Validates shapes, distinct support points and f in {0, 1}.
MomentLPInstance make_instance(std::vector<Point> support, MomentVector moments,
                               std::vector<double> f, double reference_value);

// sigma = moments of `reference` over I(k, n) and reference_value = E_ref[f].
// f is evaluated on `support` and on the reference atoms.
MomentLPInstance make_instance(std::vector<Point> support,
                               const FiniteDistribution& reference, int k,
                               const std::function<double(const Point&)>& f);

// {-1, +1} label to {0, 1}.
constexpr double to_indicator(int label) { return label > 0 ? 1.0 : 0.0; }

struct WorstCase {
  FiniteDistribution distribution;
  double value = 0.0;  // extremal E_mu[f]
  std::size_t iterations = 0;
};

// Extremal moment-matching distribution. Throws InfeasibleError when sigma
// is not realizable on the support.
WorstCase primal_worst_case(const MomentLPInstance& inst, lp::Sense sense,
                            const lp::SolverOptions& options = {});

struct SandwichPair {
  Polynomial lower;  // P_l <= f on the support
  Polynomial upper;  // P_u >= f on the support
  double upper_expectation = 0.0;  // E_sigma[P_u]
  double lower_expectation = 0.0;  // E_sigma[P_l]
  double primal_max = 0.0;
  double primal_min = 0.0;
  double upper_gap = 0.0;  // E_sigma[P_u] - reference_value
  double lower_gap = 0.0;  // reference_value - E_sigma[P_l]
  double upper_slack = 0.0;  // min over the support of P_u - f
  double lower_slack = 0.0;  // min over the support of f - P_l
};

// Dual certificates of the max and min programs.
SandwichPair dual_sandwich(const MomentLPInstance& inst,
                           const lp::SolverOptions& options = {});

// E_sigma[P] = sum_I a_I sigma_I; every term of P must be in the index set.
double expectation(const Polynomial& p, const MomentVector& moments);

struct FoolingRow {
  int k = 0;
  double threshold = 0.0;
  double uniform_probability = 0.0;  // Pr_U[p >= threshold]
  double max_probability = 0.0;
  double min_probability = 0.0;
  double gap = 0.0;
};

struct FoolingResult {
  int k = 0;
  double worst_gap = 0.0;
  std::vector<FoolingRow> rows;  // one per distinct value of p on the cube
};

// Worst Kolmogorov distance between the law of p under any k-wise
// independent distribution on {-1,+1}^n and under the uniform one. p must be
// multilinear of degree <= 2; n <= 12.
FoolingResult fool_ptf(const Polynomial& p, std::size_t n, int k,
                       const lp::SolverOptions& options = {});

struct HypercontractivityResult {
  double lhs = 0.0;  // E[|P|^q]^{1/q}
  double rhs = 0.0;  // ((q-1)/(p-1))^{d/2} E[|P|^p]^{1/p}
  int degree = 0;
  bool holds = false;
};

// Exact over the uniform cube, n <= 14, P multilinear of degree <= 2.
HypercontractivityResult hypercontractivity_check(const Polynomial& poly,
                                                  std::size_t n, double p = 2.0,
                                                  double q = 4.0);

}  // namespace momatch
