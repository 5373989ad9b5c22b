#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "momatch/halfspace.hpp"
#include "momatch/lp.hpp"
#include "momatch/polynomial.hpp"

namespace momatch {

// Predicts sign(p(x) - threshold), sign(0) = +1.
struct Hypothesis {
  Polynomial polynomial;
  double threshold = 0.0;

  int predict(std::span<const double> x) const {
    return sign_of(polynomial.evaluate(x) - threshold);
  }
};

struct FitOptions {
  std::size_t basis_cap = 5000;
  lp::SolverOptions solver;
};

struct FitResult {
  Polynomial polynomial;
  double objective = 0.0;       // sum_i |p(x_i) - y_i|
  double mean_objective = 0.0;  // objective / N
  std::size_t iterations = 0;
};

// Minimizes sum_i |p(x_i) - y_i| over polynomials of degree <= d. Solved as
//   max y^T l  s.t.  Phi^T l = 0,  -1 <= l <= 1,
// whose row multipliers are the coefficients of an optimal p.
FitResult fit_l1(const std::vector<LabeledSample>& samples, int degree,
                 const FitOptions& options = {});

struct ThresholdChoice {
  double threshold = 0.0;
  double error = 0.0;
};

// Exact empirical minimizer over {min - 1, max + 1, midpoints of consecutive
// distinct values}; ties go to the smallest threshold.
ThresholdChoice select_threshold(const Polynomial& p,
                                 const std::vector<LabeledSample>& samples);
ThresholdChoice select_threshold(std::span<const double> values,
                                 std::span<const int> labels);

struct LearnResult {
  Hypothesis hypothesis;
  FitResult fit;
  double train_error = 0.0;
};

LearnResult agnostic_learn(const std::vector<LabeledSample>& train, int degree,
                           const FitOptions& options = {});

// Fraction of samples with h(x) != y.
double evaluate(const Hypothesis& h, const std::vector<LabeledSample>& test);

enum class ScheduleFamily { kLogConcave, kSubExponential, kSubGaussian, kKWise };

const char* to_string(ScheduleFamily family);
ScheduleFamily parse_schedule_family(const std::string& name);

struct DegreeSchedule {
  ScheduleFamily family = ScheduleFamily::kSubGaussian;
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 1.0;
  int k_max = 10;
};

// With L = log(max(m, 2)) and s = sigma * eps (s = eps for log-concave):
//   G = c1 * max(log(c2 * L / s), 0)^{c3 m} / s^4.
// Sub-Gaussian and k-wise families use G, the others exp(G). May be +inf.
double schedule_value(const DegreeSchedule& s, int m, double eps, double sigma);

// ceil(schedule_value) clamped to [1, k_max].
int degree_schedule(const DegreeSchedule& s, int m, double eps, double sigma);

}  // namespace momatch
