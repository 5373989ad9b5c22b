#include "momatch/duality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "momatch/errors.hpp"
#include "momatch/kahan.hpp"

namespace momatch {

namespace {

constexpr std::size_t kMaxFoolingDimension = 12;
constexpr std::size_t kMaxHypercontractiveDimension = 14;

void require_low_degree_multilinear(const Polynomial& p, std::size_t n,
                                    const char* what) {
  require_same_dimension(n, p.dimension(), what);
  if (!p.is_multilinear() || p.degree() > 2) {
    throw std::invalid_argument(std::string(what) +
                                ": polynomial must be multilinear of degree <= 2");
  }
}

lp::LinearProgram moment_program(const MomentLPInstance& inst, lp::Sense sense) {
  lp::LinearProgram program(sense, inst.f);
  const auto& indices = inst.moments.indices();
  const auto& values = inst.moments.values();
  for (std::size_t i = 0; i < indices.size(); ++i) {
    std::vector<double> row(inst.support.size());
    for (std::size_t x = 0; x < inst.support.size(); ++x) {
      row[x] = indices[i].monomial(inst.support[x]);
    }
    program.add_constraint(std::move(row), lp::Relation::kEqual, values[i]);
  }
  return program;
}

lp::LPSolution solve_moment_program(const MomentLPInstance& inst, lp::Sense sense,
                                    const lp::SolverOptions& options) {
  const lp::LPSolution sol = lp::solve(moment_program(inst, sense), options);
  if (sol.status == lp::Status::kInfeasible) {
    throw InfeasibleError(
        "moment LP infeasible: the target moments are not realizable on this support");
  }
  if (!sol.optimal()) {
    throw SolverError(std::string("moment LP: ") + lp::to_string(sol.status) + ": " +
                      sol.diagnostics);
  }
  return sol;
}

}  // namespace

MomentLPInstance make_instance(std::vector<Point> support, MomentVector moments,
                               std::vector<double> f, double reference_value) {
  if (support.empty()) throw std::invalid_argument("moment instance: empty support");
  if (support.size() != f.size()) {
    throw std::invalid_argument("moment instance: support/f size mismatch");
  }
  for (const auto& x : support) {
    require_same_dimension(moments.dimension(), x.size(), "moment instance support");
  }
  for (double v : f) {
    if (v != 0.0 && v != 1.0) {
      throw std::invalid_argument("moment instance: f must take values in {0, 1}");
    }
  }
  // Distinctness, via the same validation as a finite law.
  FiniteDistribution::uniform(support);
  return MomentLPInstance{std::move(support), std::move(moments), std::move(f),
                          reference_value};
}

MomentLPInstance make_instance(std::vector<Point> support,
                               const FiniteDistribution& reference, int k,
                               const std::function<double(const Point&)>& f) {
  MomentVector sigma = exact_moments(DistributionSpec::finite(reference), k);
  std::vector<double> values;
  values.reserve(support.size());
  for (const auto& x : support) values.push_back(f(x));
  const double gamma = reference.expectation([&](const Point& x) { return f(x); });
  return make_instance(std::move(support), std::move(sigma), std::move(values), gamma);
}

WorstCase primal_worst_case(const MomentLPInstance& inst, lp::Sense sense,
                            const lp::SolverOptions& options) {
  const lp::LPSolution sol = solve_moment_program(inst, sense, options);
  return WorstCase{FiniteDistribution::from_weights(inst.support, sol.x), sol.objective,
                   sol.iterations};
}

double expectation(const Polynomial& p, const MomentVector& moments) {
  require_same_dimension(moments.dimension(), p.dimension(), "expectation");
  KahanSum sum;
  for (const auto& [index, coef] : p.terms()) sum += coef * moments.at(index);
  return sum.value();
}

SandwichPair dual_sandwich(const MomentLPInstance& inst,
                           const lp::SolverOptions& options) {
  const auto& indices = inst.moments.indices();
  const lp::LPSolution hi = solve_moment_program(inst, lp::Sense::kMaximize, options);
  const lp::LPSolution lo = solve_moment_program(inst, lp::Sense::kMinimize, options);

  SandwichPair out{Polynomial::from_coefficients(indices, lo.duals),
                   Polynomial::from_coefficients(indices, hi.duals)};
  out.upper_expectation = expectation(out.upper, inst.moments);
  out.lower_expectation = expectation(out.lower, inst.moments);
  out.primal_max = hi.objective;
  out.primal_min = lo.objective;
  out.upper_gap = out.upper_expectation - inst.reference_value;
  out.lower_gap = inst.reference_value - out.lower_expectation;
  out.upper_slack = std::numeric_limits<double>::infinity();
  out.lower_slack = std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < inst.support.size(); ++x) {
    out.upper_slack = std::min(out.upper_slack, out.upper(inst.support[x]) - inst.f[x]);
    out.lower_slack = std::min(out.lower_slack, inst.f[x] - out.lower(inst.support[x]));
  }
  return out;
}

FoolingResult fool_ptf(const Polynomial& p, std::size_t n, int k,
                       const lp::SolverOptions& options) {
  if (n == 0 || n > kMaxFoolingDimension) {
    throw std::invalid_argument("fool_ptf: n must lie in [1, 12]");
  }
  if (k < 0 || static_cast<std::size_t>(k) > n) {
    throw std::invalid_argument("fool_ptf: need 0 <= k <= n");
  }
  require_low_degree_multilinear(p, n, "fool_ptf");

  const std::size_t size = std::size_t{1} << n;
  std::vector<Point> cube;
  std::vector<double> values;
  cube.reserve(size);
  values.reserve(size);
  for (std::size_t b = 0; b < size; ++b) {
    cube.push_back(cube_point(b, n));
    values.push_back(p(cube.back()));
  }

  // Group the value set; values within 1e-9 relative are one threshold.
  std::vector<std::size_t> order(size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<std::size_t> group(size);
  std::vector<double> thresholds;
  for (std::size_t i = 0; i < size; ++i) {
    const double v = values[order[i]];
    if (thresholds.empty() || v - thresholds.back() > 1e-9 * (1.0 + std::abs(v))) {
      thresholds.push_back(v);
    }
    group[order[i]] = thresholds.size() - 1;
  }

  FoolingResult out;
  out.k = k;
  const MomentVector parities = uniform_cube_parities(n, k);
  for (std::size_t g = 0; g < thresholds.size(); ++g) {
    std::vector<double> f(size);
    std::size_t hits = 0;
    for (std::size_t b = 0; b < size; ++b) {
      f[b] = group[b] >= g ? 1.0 : 0.0;
      hits += group[b] >= g ? 1 : 0;
    }
    const double uniform = static_cast<double>(hits) / static_cast<double>(size);
    const MomentLPInstance inst{cube, parities, std::move(f), uniform};
    const WorstCase hi = primal_worst_case(inst, lp::Sense::kMaximize, options);
    const WorstCase lo = primal_worst_case(inst, lp::Sense::kMinimize, options);
    FoolingRow row;
    row.k = k;
    row.threshold = thresholds[g];
    row.uniform_probability = uniform;
    row.max_probability = hi.value;
    row.min_probability = lo.value;
    row.gap = std::max({hi.value - uniform, uniform - lo.value, 0.0});
    out.worst_gap = std::max(out.worst_gap, row.gap);
    out.rows.push_back(row);
  }
  return out;
}

HypercontractivityResult hypercontractivity_check(const Polynomial& poly,
                                                  std::size_t n, double p, double q) {
  if (n == 0 || n > kMaxHypercontractiveDimension) {
    throw std::invalid_argument("hypercontractivity_check: n must lie in [1, 14]");
  }
  if (!(p > 1.0 && q > p && std::isfinite(q))) {
    throw std::invalid_argument("hypercontractivity_check: need 1 < p < q < inf");
  }
  require_low_degree_multilinear(poly, n, "hypercontractivity_check");
  if (poly.is_zero()) throw std::invalid_argument("hypercontractivity_check: zero polynomial");

  const std::size_t size = std::size_t{1} << n;
  KahanSum sum_p;
  KahanSum sum_q;
  for (std::size_t b = 0; b < size; ++b) {
    const double v = std::abs(poly(cube_point(b, n)));
    sum_p += std::pow(v, p);
    sum_q += std::pow(v, q);
  }
  const double count = static_cast<double>(size);
  HypercontractivityResult out;
  out.degree = poly.degree();
  out.lhs = std::pow(sum_q.value() / count, 1.0 / q);
  out.rhs = std::pow((q - 1.0) / (p - 1.0), out.degree / 2.0) *
            std::pow(sum_p.value() / count, 1.0 / p);
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-12);
  return out;
}

}  // namespace momatch
