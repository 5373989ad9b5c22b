#include "momatch/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "momatch/errors.hpp"
#include "momatch/kahan.hpp"

namespace momatch {

FitResult fit_l1(const std::vector<LabeledSample>& samples, int degree,
                 const FitOptions& options) {
  if (samples.empty()) throw std::invalid_argument("fit_l1: no samples");
  if (degree < 0) throw std::invalid_argument("fit_l1: degree must be >= 0");
  const std::size_t n = samples.front().point.size();
  if (n == 0) throw DimensionError("fit_l1: zero-dimensional samples");
  const std::size_t d = count_multi_indices(degree, n);
  if (d > options.basis_cap) {
    throw std::length_error("fit_l1: basis size " + std::to_string(d) +
                            " exceeds the cap " + std::to_string(options.basis_cap));
  }
  MonomialBasis basis(enumerate_multi_indices(degree, n));
  const std::size_t count = samples.size();

  std::vector<double> y(count);
  std::vector<std::vector<double>> rows(d, std::vector<double>(count));
  std::vector<double> phi(d);
  for (std::size_t i = 0; i < count; ++i) {
    const auto& s = samples[i];
    require_same_dimension(n, s.point.size(), "fit_l1");
    if (s.label != 1 && s.label != -1) {
      throw std::invalid_argument("fit_l1: labels must be -1 or +1");
    }
    y[i] = s.label;
    basis.evaluate(s.point, phi);
    for (std::size_t r = 0; r < d; ++r) rows[r][i] = phi[r];
  }

  lp::LinearProgram program(lp::Sense::kMaximize, y);
  for (auto& row : rows) program.add_constraint(std::move(row), lp::Relation::kEqual, 0.0);
  for (std::size_t i = 0; i < count; ++i) program.set_bounds(i, -1.0, 1.0);

  const lp::LPSolution sol = lp::solve(program, options.solver);
  if (!sol.optimal()) {
    throw SolverError(std::string("fit_l1: LP ") + lp::to_string(sol.status) + ": " +
                      sol.diagnostics);
  }

  FitResult out{Polynomial::from_coefficients(basis.indices(), sol.duals), 0.0, 0.0,
                sol.iterations};
  KahanSum total;
  for (const auto& s : samples) total += std::abs(out.polynomial.evaluate(s.point) - s.label);
  out.objective = total.value();
  out.mean_objective = out.objective / static_cast<double>(count);
  return out;
}

ThresholdChoice select_threshold(std::span<const double> values,
                                 std::span<const int> labels) {
  if (values.empty()) throw std::invalid_argument("select_threshold: no samples");
  if (values.size() != labels.size()) {
    throw std::invalid_argument("select_threshold: values/labels size mismatch");
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  // t below every value: everything predicted +1.
  long errors = 0;
  for (int l : labels) errors += l < 0 ? 1 : 0;
  long best_errors = errors;
  double best_t = values[order.front()] - 1.0;

  std::size_t i = 0;
  while (i < order.size()) {
    const double v = values[order[i]];
    while (i < order.size() && values[order[i]] == v) {
      errors += labels[order[i]] > 0 ? 1 : -1;
      ++i;
    }
    if (errors < best_errors) {
      best_errors = errors;
      best_t = i < order.size() ? v + (values[order[i]] - v) / 2.0 : v + 1.0;
    }
  }
  return {best_t, static_cast<double>(best_errors) / static_cast<double>(values.size())};
}

ThresholdChoice select_threshold(const Polynomial& p,
                                 const std::vector<LabeledSample>& samples) {
  std::vector<double> values;
  std::vector<int> labels;
  values.reserve(samples.size());
  labels.reserve(samples.size());
  for (const auto& s : samples) {
    values.push_back(p.evaluate(s.point));
    labels.push_back(s.label);
  }
  return select_threshold(values, labels);
}

LearnResult agnostic_learn(const std::vector<LabeledSample>& train, int degree,
                           const FitOptions& options) {
  FitResult fit = fit_l1(train, degree, options);
  const ThresholdChoice t = select_threshold(fit.polynomial, train);
  Hypothesis h{fit.polynomial, t.threshold};
  return {std::move(h), std::move(fit), t.error};
}

double evaluate(const Hypothesis& h, const std::vector<LabeledSample>& test) {
  if (test.empty()) throw std::invalid_argument("evaluate: empty test set");
  std::size_t wrong = 0;
  for (const auto& s : test) wrong += h.predict(s.point) != s.label ? 1 : 0;
  return static_cast<double>(wrong) / static_cast<double>(test.size());
}

const char* to_string(ScheduleFamily family) {
  switch (family) {
    case ScheduleFamily::kLogConcave: return "logconcave";
    case ScheduleFamily::kSubExponential: return "subexponential";
    case ScheduleFamily::kSubGaussian: return "subgaussian";
    case ScheduleFamily::kKWise: return "kwise";
  }
  return "?";
}

ScheduleFamily parse_schedule_family(const std::string& name) {
  for (auto f : {ScheduleFamily::kLogConcave, ScheduleFamily::kSubExponential,
                 ScheduleFamily::kSubGaussian, ScheduleFamily::kKWise}) {
    if (name == to_string(f)) return f;
  }
  throw std::invalid_argument("unknown schedule family '" + name + "'");
}

double schedule_value(const DegreeSchedule& s, int m, double eps, double sigma) {
  if (!(s.c1 > 0.0 && s.c2 > 0.0 && s.c3 > 0.0)) {
    throw std::invalid_argument("degree_schedule: constants must be positive");
  }
  if (s.k_max < 1) throw std::invalid_argument("degree_schedule: k_max must be >= 1");
  if (m < 1) throw std::invalid_argument("degree_schedule: m must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("degree_schedule: eps must lie in (0, 1)");
  }
  const bool uses_sigma = s.family != ScheduleFamily::kLogConcave;
  if (uses_sigma && !(sigma > 0.0 && sigma < 1.0)) {
    throw std::invalid_argument("degree_schedule: sigma must lie in (0, 1)");
  }
  const double scale = uses_sigma ? sigma * eps : eps;
  const double big_l = std::log(std::max(m, 2));
  const double inner = std::max(std::log(s.c2 * big_l / scale), 0.0);
  const double g = s.c1 * std::pow(inner, s.c3 * m) / std::pow(scale, 4);
  switch (s.family) {
    case ScheduleFamily::kSubGaussian:
    case ScheduleFamily::kKWise:
      return g;
    case ScheduleFamily::kLogConcave:
    case ScheduleFamily::kSubExponential:
      return std::exp(g);
  }
  return g;
}

int degree_schedule(const DegreeSchedule& s, int m, double eps, double sigma) {
  const double v = schedule_value(s, m, eps, sigma);
  if (!(v < static_cast<double>(s.k_max))) return s.k_max;
  return std::clamp(static_cast<int>(std::ceil(v)), 1, s.k_max);
}

}  // namespace momatch
