#include "harness/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <thread>

#include "harness/expression.hpp"
#include "momatch/duality.hpp"
#include "momatch/errors.hpp"
#include "momatch/halfspace.hpp"
#include "momatch/learner.hpp"
#include "momatch/metrics.hpp"
#include "momatch/moments.hpp"

#ifndef MOMATCH_VERSION
#define MOMATCH_VERSION "unknown"
#endif

namespace momatch::harness {

namespace {

using Cells = std::vector<Cell>;

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

std::vector<double> first_coordinate(const std::vector<Point>& points) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p[0]);
  return out;
}

HalfspaceFunction make_target(const ExperimentConfig& c, Rng& rng) {
  std::vector<Halfspace> hs;
  for (std::size_t r = 0; r < c.halfspaces; ++r) {
    hs.emplace_back(random_unit_vector(c.dimension, rng), c.threshold);
  }
  if (c.target == "single") return HalfspaceFunction::single(hs.front());
  if (c.target == "intersection") return HalfspaceFunction::intersection(std::move(hs));
  std::vector<int> table(std::size_t{1} << c.halfspaces);
  for (auto& v : table) v = rng.rademacher();
  return HalfspaceFunction(std::move(hs), std::move(table));
}

std::vector<LabeledSample> labeled(const std::vector<Point>& points, const HalfspaceFunction& f,
                                   double noise_rate, Rng& noise) {
  std::vector<LabeledSample> out;
  out.reserve(points.size());
  for (const auto& x : points) {
    int y = f(x);
    if (noise_rate > 0.0 && noise.uniform() < noise_rate) y = -y;
    out.push_back({x, y});
  }
  return out;
}

Cells run_learn(const ExperimentConfig& c, std::uint64_t seed) {
  const Rng root(seed);
  Rng target_rng = root.split(0);
  const auto f = make_target(c, target_rng);
  const auto spec = make_distribution(c);
  Rng noise = root.split(3);
  const auto train = labeled(sample(spec, root.split(1).key(), c.train_size), f, c.noise_rate, noise);
  const auto test = labeled(sample(spec, root.split(2).key(), c.test_size), f, c.noise_rate, noise);

  FitOptions options;
  options.basis_cap = c.basis_cap;
  Cells cells;
  double best = std::numeric_limits<double>::infinity();
  int best_degree = 0;
  for (int d : c.degrees) {
    const auto result = agnostic_learn(train, d, options);
    const double test_error = evaluate(result.hypothesis, test);
    cells.push_back({seed, d, "train_l1", 0.0, result.fit.mean_objective});
    cells.push_back({seed, d, "train_error", 0.0, result.train_error});
    cells.push_back({seed, d, "test_error", 0.0, test_error});
    cells.push_back({seed, d, "lp_iterations", 0.0, static_cast<double>(result.fit.iterations)});
    if (test_error < best) {
      best = test_error;
      best_degree = d;
    }
  }
  cells.push_back({seed, best_degree, "best_test_error", 0.0, best});
  return cells;
}

Cells run_sandwich(const ExperimentConfig& c, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = 1 + rng.below(c.max_dimension);
  const int k = c.max_order == 0 ? 0 : 1 + static_cast<int>(rng.below(c.max_order));
  const std::size_t size = 1 + rng.below(c.max_support);

  std::vector<Point> support(size, Point(n));
  for (auto& x : support) {
    for (auto& v : x) v = rng.normal();
  }
  std::vector<double> weights(size, 0.0);
  for (auto& w : weights) w = rng.uniform() < 0.5 ? rng.uniform_open() : 0.0;
  weights[rng.below(size)] = rng.uniform_open();
  const auto reference = FiniteDistribution::from_weights(support, weights);

  const Point w = random_unit_vector(n, rng);
  const double theta = 0.3 * rng.normal();
  const auto f = [&](const Point& x) { return to_indicator(sign_of(dot(w, x) - theta)); };
  const auto inst = make_instance(support, reference, k, f);

  const double primal_max = primal_worst_case(inst, lp::Sense::kMaximize).value;
  const double primal_min = primal_worst_case(inst, lp::Sense::kMinimize).value;
  const auto pair = dual_sandwich(inst);
  const double max_excess = primal_max - inst.reference_value;
  const double upper_excess = pair.upper_expectation - inst.reference_value;

  return {
      {seed, k, "dimension", 0.0, static_cast<double>(n)},
      {seed, k, "support_size", 0.0, static_cast<double>(size)},
      {seed, k, "reference_value", 0.0, inst.reference_value},
      {seed, k, "primal_max", 0.0, primal_max},
      {seed, k, "primal_min", 0.0, primal_min},
      {seed, k, "dual_upper", 0.0, pair.upper_expectation},
      {seed, k, "dual_lower", 0.0, pair.lower_expectation},
      {seed, k, "rel_gap_max", 0.0,
       std::abs(primal_max - pair.upper_expectation) / std::max(1.0, std::abs(primal_max))},
      {seed, k, "rel_gap_min", 0.0,
       std::abs(primal_min - pair.lower_expectation) / std::max(1.0, std::abs(primal_min))},
      {seed, k, "upper_slack", 0.0, pair.upper_slack},
      {seed, k, "lower_slack", 0.0, pair.lower_slack},
      {seed, k, "max_excess", 0.0, max_excess},
      {seed, k, "upper_excess", 0.0, upper_excess},
      {seed, k, "excess_mismatch", 0.0, std::abs(upper_excess - max_excess)},
  };
}

Cells run_fool(const ExperimentConfig& c, std::uint64_t seed) {
  Polynomial p(c.dimension);
  if (!c.polynomial.empty()) {
    try {
      p = parse_polynomial_expression(c.polynomial, c.dimension);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("polynomial", e.what());
    }
  } else {
    Rng rng(seed);
    p = random_quadratic(c.dimension, c.max_regularity, rng);
  }
  Cells cells;
  if (p.is_multilinear() && p.degree() >= 1 && p.degree() <= 2) {
    cells.push_back({seed, 0, "regularity", 0.0, regularity(p)});
  }
  std::vector<int> orders = c.orders;
  if (c.include_full_order) orders.push_back(static_cast<int>(c.dimension));
  std::sort(orders.begin(), orders.end());
  orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
  for (int k : orders) {
    const auto result = fool_ptf(p, c.dimension, k);
    for (const auto& row : result.rows) cells.push_back({seed, k, "gap", row.threshold, row.gap});
    cells.push_back({seed, k, "worst_gap", 0.0, result.worst_gap});
  }
  return cells;
}

Cells probe_anticoncentration(const ExperimentConfig& c, std::uint64_t seed) {
  const auto values = first_coordinate(sample(make_distribution(c), seed, c.sample_size));
  Cells cells;
  for (const auto& wm : anticoncentration_probe(values, c.alphas)) {
    cells.push_back({seed, 0, "window_mass", wm.alpha, wm.mass});
    cells.push_back({seed, 0, "window_start", wm.alpha, wm.start});
  }
  return cells;
}

Cells probe_directional(const ExperimentConfig& c, std::uint64_t seed) {
  const Rng root(seed);
  const auto points = sample(make_distribution(c), root.split(0).key(), c.sample_size);
  Rng dir_rng = root.split(1);
  Cells cells;
  std::vector<double> min_margin(c.moment_orders.size(), std::numeric_limits<double>::infinity());
  for (std::size_t d = 0; d < c.directions; ++d) {
    const Point w = random_unit_vector(c.dimension, dir_rng);
    const double m2 = directional_moment(points, w, 2);
    const std::string tag = ".w" + std::to_string(d);
    cells.push_back({seed, 0, "second_moment" + tag, 0.0, m2});
    for (std::size_t i = 0; i < c.moment_orders.size(); ++i) {
      const int r = c.moment_orders[i];
      const double moment = directional_moment(points, w, r);
      const double bound = std::pow(static_cast<double>(r), r) * std::pow(m2, 0.5 * r);
      const double margin = bound / moment;
      cells.push_back({seed, 0, "moment" + tag, static_cast<double>(r), moment});
      cells.push_back({seed, 0, "margin" + tag, static_cast<double>(r), margin});
      min_margin[i] = std::min(min_margin[i], margin);
    }
  }
  for (std::size_t i = 0; i < c.moment_orders.size(); ++i) {
    cells.push_back({seed, 0, "min_margin", static_cast<double>(c.moment_orders[i]), min_margin[i]});
  }
  return cells;
}

Cells probe_hypercontractivity(const ExperimentConfig& c, std::uint64_t seed) {
  Cells cells;
  for (std::size_t n = 1; n <= c.max_dimension; ++n) {
    std::vector<MultiIndex> basis;
    for (const auto& idx : enumerate_multilinear_indices(2, n)) basis.push_back(idx);
    std::size_t total = 1;
    for (std::size_t i = 0; i < basis.size(); ++i) total *= 3;
    std::size_t checked = 0;
    std::size_t failures = 0;
    double max_ratio = 0.0;
    std::vector<double> coef(basis.size());
    for (std::size_t code = 1; code < total; ++code) {
      std::size_t rest = code;
      for (auto& a : coef) {
        a = static_cast<double>(static_cast<int>(rest % 3) - 1);
        rest /= 3;
      }
      const auto p = Polynomial::from_coefficients(basis, coef);
      if (p.is_zero()) continue;
      const auto result = hypercontractivity_check(p, n);
      ++checked;
      if (!result.holds) ++failures;
      max_ratio = std::max(max_ratio, result.lhs / result.rhs);
    }
    const double dim = static_cast<double>(n);
    cells.push_back({seed, 0, "checked", dim, static_cast<double>(checked)});
    cells.push_back({seed, 0, "failures", dim, static_cast<double>(failures)});
    cells.push_back({seed, 0, "max_ratio", dim, max_ratio});
  }
  return cells;
}

// Finite pairs on a small integer grid; ties with thresholds exercise sign(0).
Cells probe_sign_patterns(const ExperimentConfig& c, std::uint64_t seed) {
  const std::size_t m = c.dimension;
  if (m > 3) throw ConfigError("dimension", "must be <= 3 for the sign-pattern probe");
  Rng rng(seed);
  const auto draw = [&]() {
    EmpiricalVector v(1 + rng.below(c.max_atoms), Point(m));
    for (auto& x : v) {
      for (auto& t : x) t = static_cast<double>(static_cast<int>(rng.below(5)) - 2);
    }
    return v;
  };
  const EmpiricalVector x = draw();
  const EmpiricalVector y = draw();
  const double bound = std::ldexp(max_signed_projection_cdf(x, y), static_cast<int>(m));

  const std::size_t patterns = std::size_t{1} << m;
  const std::size_t functions = std::size_t{1} << patterns;
  std::vector<double> grid;
  for (int i = -5; i <= 5; ++i) grid.push_back(0.5 * i);
  std::size_t cells_total = 1;
  for (std::size_t r = 0; r < m; ++r) cells_total *= grid.size();

  double max_difference = 0.0;
  std::size_t violations = 0;
  std::size_t tested = 0;
  Point theta(m);
  for (std::size_t cell = 0; cell < cells_total; ++cell) {
    std::size_t rest = cell;
    for (auto& t : theta) {
      t = grid[rest % grid.size()];
      rest /= grid.size();
    }
    const auto px = sign_pattern_distribution(x, theta);
    const auto py = sign_pattern_distribution(y, theta);
    for (std::size_t g = 0; g < functions; ++g) {
      double diff = 0.0;
      for (std::size_t s = 0; s < patterns; ++s) {
        if ((g >> s) & 1U) diff += px[s] - py[s];
      }
      diff = std::abs(diff);
      ++tested;
      max_difference = std::max(max_difference, diff);
      if (diff > bound + 1e-12) ++violations;
    }
  }
  return {
      {seed, 0, "bound", 0.0, bound},
      {seed, 0, "max_difference", 0.0, max_difference},
      {seed, 0, "tested", 0.0, static_cast<double>(tested)},
      {seed, 0, "violations", 0.0, static_cast<double>(violations)},
  };
}

Cells probe_distances(const ExperimentConfig& c, std::uint64_t seed) {
  if (c.smoothing_sigma == 0.0) {
    throw ConfigError("smoothing_sigma", "the distance probe compares a law with its smoothing");
  }
  ExperimentConfig base = c;
  base.smoothing_sigma = 0.0;
  base.noise_variance = 0.0;
  const Rng root(seed);
  const auto project = [](const std::vector<Point>& pts) {
    EmpiricalVector out;
    for (const auto& p : pts) out.push_back({p[0]});
    return out;
  };
  const auto x = project(sample(make_distribution(base), root.split(0).key(), c.sample_size));
  const auto y = project(sample(make_distribution(c), root.split(1).key(), c.sample_size));
  const auto lambda = d_lambda(x, y);
  return {
      {seed, 0, "d_cdf", 0.0, d_cdf(x, y)},
      {seed, 0, "d_levy", 0.0, d_levy(x, y)},
      {seed, 0, "d_lambda", 0.0, lambda.value},
      {seed, 0, "d_lambda_t", 0.0, lambda.best_t},
  };
}

Cells run_probe(const ExperimentConfig& c, std::uint64_t seed) {
  if (c.probe == "anticoncentration") return probe_anticoncentration(c, seed);
  if (c.probe == "directional_moment") return probe_directional(c, seed);
  if (c.probe == "hypercontractivity") return probe_hypercontractivity(c, seed);
  if (c.probe == "sign_patterns") return probe_sign_patterns(c, seed);
  return probe_distances(c, seed);
}

std::string index_name(const MultiIndex& idx) {
  std::string out = "m";
  for (int e : idx.exponents()) out += "_" + std::to_string(e);
  return out;
}

Cells run_moments(const ExperimentConfig& c, std::uint64_t seed) {
  const auto spec = make_distribution(c);
  const Rng root(seed);
  const bool exact = c.route == "exact";
  std::vector<Point> points;
  if (!exact) points = sample(spec, root.split(0).key(), c.sample_size);

  Cells cells;
  const auto moments = exact ? exact_moments(spec, c.order) : empirical_moments(points, c.order);
  for (std::size_t i = 0; i < moments.size(); ++i) {
    const auto& idx = moments.indices()[i];
    cells.push_back({seed, idx.degree(), index_name(idx), 0.0, moments.values()[i]});
  }
  if (c.beta_order > 0) {
    std::vector<Point> base{Point(c.dimension, 0.0)};
    base[0][0] = 1.0;
    const auto dirs = probe_directions(base, c.dimension, c.directions - 1, root.split(1).key());
    const auto profile = exact ? beta_profile(spec, dirs, c.beta_order)
                               : beta_profile(points, dirs, c.beta_order);
    for (std::size_t i = 0; i < profile.j.size(); ++i) {
      cells.push_back({seed, profile.j[i], "beta", 0.0, profile.beta[i]});
      cells.push_back({seed, profile.j[i], "mu_2j", 0.0, profile.mu_2j[i]});
    }
    cells.push_back({seed, 0, "mu2_root", 0.0, profile.mu2_root});
  }
  return cells;
}

Cells run_trial(const ExperimentConfig& c, std::uint64_t seed) {
  switch (c.kind) {
    case Kind::kLearn: return run_learn(c, seed);
    case Kind::kSandwich: return run_sandwich(c, seed);
    case Kind::kFool: return run_fool(c, seed);
    case Kind::kProbe: return run_probe(c, seed);
    case Kind::kMoments: return run_moments(c, seed);
  }
  return {};
}

}  // namespace

DistributionSpec make_distribution(const ExperimentConfig& c) {
  const std::size_t n = c.dimension;
  DistributionSpec spec = [&]() {
    if (c.distribution == "gaussian") return DistributionSpec::gaussian(n);
    if (c.distribution == "ball") return DistributionSpec::uniform_ball(n);
    if (c.distribution == "cube") return DistributionSpec::uniform_cube(n);
    if (c.distribution == "laplace") return DistributionSpec::laplace(n, c.laplace_scale);
    if (c.distribution == "rademacher") return DistributionSpec::rademacher(n);
    if (c.distribution == "pointmass") {
      return DistributionSpec::finite(FiniteDistribution::point_mass(Point(n, 0.0)));
    }
    throw ConfigError("distribution", "unknown distribution '" + c.distribution + "'");
  }();
  if (c.smoothing_sigma == 0.0) return spec;
  if (c.noise_variance > 0.0) {
    const Eigen::MatrixXd cov =
        c.noise_variance * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                     static_cast<Eigen::Index>(n));
    return smooth(spec, c.smoothing_sigma, cov);
  }
  return smooth(spec, c.smoothing_sigma);
}

Polynomial random_quadratic(std::size_t n, double max_regularity, Rng& rng) {
  const auto basis = enumerate_multilinear_indices(2, n);
  std::vector<double> coef(basis.size());
  for (int attempt = 0; attempt < 100000; ++attempt) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const int deg = basis[i].degree();
      coef[i] = deg == 2 ? 0.5 * rng.normal() : rng.normal();
    }
    auto p = Polynomial::from_coefficients(basis, coef);
    if (max_regularity <= 0.0 || regularity(p) <= max_regularity) return p;
  }
  throw std::runtime_error("random_quadratic: no polynomial met the regularity bound");
}

Report run(const ExperimentConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();

  std::vector<Cells> per_trial(config.trials);
  std::vector<std::exception_ptr> errors(config.trials);
  const auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t t = first; t < config.trials; t += stride) {
      try {
        per_trial[t] = run_trial(config, trial_seed(config.seed, t));
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min(config.workers, config.trials);
  if (workers <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  Report report;
  report.kind = to_string(config.kind);
  report.echo = config.echo;
  report.version = MOMATCH_VERSION;
  for (auto& cells : per_trial) {
    report.cells.insert(report.cells.end(), std::make_move_iterator(cells.begin()),
                        std::make_move_iterator(cells.end()));
  }
  sort_cells(report.cells);
  report.summary = summarize(report.cells);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace momatch::harness
