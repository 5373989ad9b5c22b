#include "momatch/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "momatch/errors.hpp"
#include "momatch/lp.hpp"
#include "momatch/rng.hpp"

namespace momatch {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kMassTolerance = 1e-12;
constexpr double kConditionLimit = 1e12;
constexpr std::size_t kMaxKwiseDimension = 16;
// Dense LP route for kwise_construct: rows * 2^n entries.
constexpr std::size_t kMaxKwiseEntries = std::size_t{1} << 24;

void require_positive_dimension(std::size_t n) {
  if (n == 0) throw std::invalid_argument("distribution dimension must be >= 1");
}

Eigen::MatrixXd symmetric_factor(const Eigen::MatrixXd& cov) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const Eigen::VectorXd roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * roots.asDiagonal() *
         eig.eigenvectors().transpose();
}

}  // namespace

// ---------------------------------------------------------------------------
// FiniteDistribution

FiniteDistribution::FiniteDistribution(std::vector<Point> support,
                                       std::vector<double> probs)
    : support_(std::move(support)), probs_(std::move(probs)) {
  if (support_.empty()) {
    throw std::invalid_argument("FiniteDistribution: empty support");
  }
  if (support_.size() != probs_.size()) {
    throw std::invalid_argument("FiniteDistribution: support/probs size mismatch");
  }
  const std::size_t n = support_.front().size();
  require_positive_dimension(n);
  KahanSum total;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    require_same_dimension(n, support_[i].size(), "FiniteDistribution");
    for (double v : support_[i]) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("FiniteDistribution: non-finite coordinate");
      }
    }
    if (!(probs_[i] >= 0.0) || !std::isfinite(probs_[i])) {
      throw std::invalid_argument("FiniteDistribution: probabilities must be >= 0");
    }
    total += probs_[i];
  }
  if (std::abs(total.value() - 1.0) > kMassTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "FiniteDistribution: probabilities sum to " << total.value();
    throw std::invalid_argument(os.str());
  }
  std::vector<const Point*> sorted;
  sorted.reserve(support_.size());
  for (const auto& p : support_) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(),
            [](const Point* a, const Point* b) { return *a < *b; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (*sorted[i] == *sorted[i - 1]) {
      throw std::invalid_argument("FiniteDistribution: duplicate support point");
    }
  }
}

FiniteDistribution FiniteDistribution::from_weights(std::vector<Point> support,
                                                    std::vector<double> weights,
                                                    double tol) {
  if (support.size() != weights.size()) {
    throw std::invalid_argument("FiniteDistribution::from_weights: size mismatch");
  }
  std::vector<Point> kept;
  std::vector<double> w;
  KahanSum total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    double v = weights[i];
    if (v < -tol || !std::isfinite(v)) {
      throw std::invalid_argument("FiniteDistribution::from_weights: negative weight");
    }
    if (v <= 0.0) continue;
    kept.push_back(std::move(support[i]));
    w.push_back(v);
    total += v;
  }
  if (w.empty()) {
    throw std::invalid_argument("FiniteDistribution::from_weights: no mass");
  }
  const double z = total.value();
  for (double& v : w) v /= z;
  return FiniteDistribution(std::move(kept), std::move(w));
}

FiniteDistribution FiniteDistribution::uniform(std::vector<Point> support) {
  const std::size_t s = support.size();
  if (s == 0) throw std::invalid_argument("FiniteDistribution::uniform: empty");
  std::vector<double> probs(s, 1.0 / static_cast<double>(s));
  return FiniteDistribution(std::move(support), std::move(probs));
}

FiniteDistribution FiniteDistribution::point_mass(Point x) {
  std::vector<Point> support{std::move(x)};
  return FiniteDistribution(std::move(support), {1.0});
}

Point AffineMap::apply(std::span<const double> x) const {
  require_same_dimension(static_cast<std::size_t>(matrix.cols()), x.size(),
                         "AffineMap::apply");
  const Eigen::Map<const Eigen::VectorXd> v(x.data(),
                                            static_cast<Eigen::Index>(x.size()));
  const Eigen::VectorXd y = matrix * v + shift;
  return Point(y.data(), y.data() + y.size());
}

// ---------------------------------------------------------------------------
// DistributionSpec

DistributionSpec DistributionSpec::gaussian(std::size_t n) {
  require_positive_dimension(n);
  return DistributionSpec(StandardGaussian{n});
}

DistributionSpec DistributionSpec::uniform_ball(std::size_t n) {
  require_positive_dimension(n);
  return DistributionSpec(UniformBall{n});
}

DistributionSpec DistributionSpec::uniform_cube(std::size_t n) {
  require_positive_dimension(n);
  return DistributionSpec(UniformCube{n});
}

DistributionSpec DistributionSpec::laplace(std::size_t n, double scale) {
  require_positive_dimension(n);
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("laplace: scale must be positive");
  }
  return DistributionSpec(LaplaceProduct{n, scale});
}

DistributionSpec DistributionSpec::rademacher(std::size_t n) {
  require_positive_dimension(n);
  return DistributionSpec(RademacherCube{n});
}

DistributionSpec DistributionSpec::finite(FiniteDistribution dist) {
  return DistributionSpec(
      FiniteSupport{std::make_shared<const FiniteDistribution>(std::move(dist))});
}

DistributionSpec DistributionSpec::kwise(std::size_t n, int k,
                                         std::uint64_t seed) {
  auto dist = std::make_shared<const FiniteDistribution>(kwise_construct(n, k, seed));
  return DistributionSpec(KWise{n, k, seed, std::move(dist)});
}

std::size_t DistributionSpec::dimension() const {
  return std::visit(
      Overloaded{
          [](const FiniteSupport& d) { return d.dist->dimension(); },
          [](const KWise& d) { return d.n; },
          [](const Smoothed& d) { return d.inner->dimension(); },
          [](const auto& d) -> std::size_t { return d.n; },
      },
      v_);
}

std::string DistributionSpec::name() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const StandardGaussian& d) { os << "gaussian(n=" << d.n << ")"; },
                 [&](const UniformBall& d) { os << "ball(n=" << d.n << ")"; },
                 [&](const UniformCube& d) { os << "cube(n=" << d.n << ")"; },
                 [&](const LaplaceProduct& d) {
                   os << "laplace(n=" << d.n << ",scale=" << d.scale << ")";
                 },
                 [&](const RademacherCube& d) { os << "rademacher(n=" << d.n << ")"; },
                 [&](const FiniteSupport& d) {
                   os << "finite(n=" << d.dist->dimension()
                      << ",size=" << d.dist->size() << ")";
                 },
                 [&](const KWise& d) {
                   os << "kwise(n=" << d.n << ",k=" << d.k << ",seed=" << d.seed << ")";
                 },
                 [&](const Smoothed& d) {
                   os << "smoothed(" << d.inner->name() << ",sigma=" << d.sigma
                      << (d.explicit_cov ? ",explicit_cov" : "") << ")";
                 },
             },
             v_);
  return os.str();
}

namespace {

Eigen::VectorXd finite_mean(const FiniteDistribution& d) {
  const auto n = static_cast<Eigen::Index>(d.dimension());
  Eigen::VectorXd mu(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    mu(j) = d.expectation([j](const Point& x) { return x[static_cast<std::size_t>(j)]; });
  }
  return mu;
}

Eigen::MatrixXd finite_covariance(const FiniteDistribution& d) {
  const auto n = static_cast<Eigen::Index>(d.dimension());
  const Eigen::VectorXd mu = finite_mean(d);
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a; b < n; ++b) {
      const auto ua = static_cast<std::size_t>(a);
      const auto ub = static_cast<std::size_t>(b);
      c(a, b) = d.expectation([&](const Point& x) {
        return (x[ua] - mu(a)) * (x[ub] - mu(b));
      });
      c(b, a) = c(a, b);
    }
  }
  return c;
}

}  // namespace

Eigen::VectorXd DistributionSpec::mean() const {
  return std::visit(
      Overloaded{
          [](const FiniteSupport& d) { return finite_mean(*d.dist); },
          [](const KWise& d) { return finite_mean(*d.dist); },
          [](const Smoothed& d) { return d.inner->mean(); },
          [this](const auto&) -> Eigen::VectorXd {
            return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension()));
          },
      },
      v_);
}

Eigen::MatrixXd DistributionSpec::covariance() const {
  const auto n = static_cast<Eigen::Index>(dimension());
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  return std::visit(
      Overloaded{
          [&](const StandardGaussian&) -> Eigen::MatrixXd { return eye; },
          [&](const UniformBall&) -> Eigen::MatrixXd {
            return eye / (static_cast<double>(n) + 2.0);
          },
          [&](const UniformCube&) -> Eigen::MatrixXd { return eye / 3.0; },
          [&](const LaplaceProduct& d) -> Eigen::MatrixXd {
            return eye * (2.0 * d.scale * d.scale);
          },
          [&](const RademacherCube&) -> Eigen::MatrixXd { return eye; },
          [](const FiniteSupport& d) { return finite_covariance(*d.dist); },
          [](const KWise& d) { return finite_covariance(*d.dist); },
          [](const Smoothed& d) -> Eigen::MatrixXd {
            return d.inner->covariance() + d.noise_cov;
          },
      },
      v_);
}

DistributionSpec smooth(const DistributionSpec& spec, double sigma,
                        std::optional<Eigen::MatrixXd> noise_cov) {
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw std::invalid_argument("smooth: sigma must lie in (0, 1)");
  }
  const Eigen::MatrixXd cov = spec.covariance();
  const auto n = cov.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const double top = std::max(eig.eigenvalues().maxCoeff(), 0.0);
  Eigen::MatrixXd sigma_matrix;
  bool explicit_cov = false;
  if (!noise_cov) {
    if (!(eig.eigenvalues().minCoeff() > 1e-12 * std::max(1.0, top))) {
      throw std::invalid_argument(
          "smooth: inner covariance is singular; supply an explicit noise covariance");
    }
    sigma_matrix = sigma * cov;
  } else {
    sigma_matrix = *noise_cov;
    explicit_cov = true;
    if (sigma_matrix.rows() != n || sigma_matrix.cols() != n) {
      throw DimensionError("smooth: noise covariance has the wrong shape");
    }
    const double scale = std::max(1.0, sigma_matrix.cwiseAbs().maxCoeff());
    if ((sigma_matrix - sigma_matrix.transpose()).cwiseAbs().maxCoeff() >
        1e-12 * scale) {
      throw std::invalid_argument("smooth: noise covariance is not symmetric");
    }
    sigma_matrix = 0.5 * (sigma_matrix + sigma_matrix.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> se(sigma_matrix);
    if (se.eigenvalues().minCoeff() < -1e-12 * scale) {
      throw std::invalid_argument("smooth: noise covariance is not PSD");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> diff(sigma_matrix - sigma * cov);
    if (diff.eigenvalues().minCoeff() < -1e-9 * std::max(scale, top)) {
      throw std::invalid_argument(
          "smooth: noise covariance must dominate sigma * cov(inner)");
    }
  }
  Smoothed s{std::make_shared<const DistributionSpec>(spec), sigma, sigma_matrix,
             symmetric_factor(sigma_matrix), explicit_cov};
  return DistributionSpec(std::move(s));
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

class CategoricalSampler {
 public:
  explicit CategoricalSampler(const FiniteDistribution& d) : dist_(d) {
    cumulative_.reserve(d.size());
    KahanSum acc;
    for (double p : d.probs()) {
      acc += p;
      cumulative_.push_back(acc.value());
    }
  }
  const Point& draw(Rng& rng) const {
    const double u = rng.uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return dist_.support()[static_cast<std::size_t>(it - cumulative_.begin())];
  }

 private:
  const FiniteDistribution& dist_;
  std::vector<double> cumulative_;
};

std::vector<Point> sample_finite(const FiniteDistribution& d, Rng& rng,
                                 std::size_t count) {
  CategoricalSampler sampler(d);
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sampler.draw(rng));
  return out;
}

template <class Draw>
std::vector<Point> sample_product(std::size_t n, std::size_t count, Draw draw) {
  std::vector<Point> out(count, Point(n));
  for (auto& p : out) {
    for (auto& v : p) v = draw();
  }
  return out;
}

}  // namespace

std::vector<Point> sample(const DistributionSpec& spec, std::uint64_t seed,
                          std::size_t count) {
  if (count == 0) throw std::invalid_argument("sample: count must be >= 1");
  Rng rng(seed);
  return std::visit(
      Overloaded{
          [&](const StandardGaussian& d) {
            return sample_product(d.n, count, [&] { return rng.normal(); });
          },
          [&](const UniformCube& d) {
            return sample_product(d.n, count,
                                  [&] { return 2.0 * rng.uniform() - 1.0; });
          },
          [&](const RademacherCube& d) {
            return sample_product(d.n, count, [&] {
              return static_cast<double>(rng.rademacher());
            });
          },
          [&](const LaplaceProduct& d) {
            return sample_product(d.n, count, [&] {
              const double u = rng.uniform_open();
              return u < 0.5 ? d.scale * std::log(2.0 * u)
                             : -d.scale * std::log(2.0 * (1.0 - u));
            });
          },
          [&](const UniformBall& d) {
            std::vector<Point> out(count, Point(d.n));
            const double inv_n = 1.0 / static_cast<double>(d.n);
            for (auto& p : out) {
              double norm_sq = 0.0;
              do {
                norm_sq = 0.0;
                for (auto& v : p) {
                  v = rng.normal();
                  norm_sq += v * v;
                }
              } while (norm_sq == 0.0);
              const double radius =
                  std::pow(rng.uniform_open_closed(), inv_n) / std::sqrt(norm_sq);
              for (auto& v : p) v *= radius;
            }
            return out;
          },
          [&](const FiniteSupport& d) { return sample_finite(*d.dist, rng, count); },
          [&](const KWise& d) { return sample_finite(*d.dist, rng, count); },
          [&](const Smoothed& d) {
            std::vector<Point> out = sample(*d.inner, rng.split(0).key(), count);
            Rng noise = rng.split(1);
            const auto n = d.noise_factor.rows();
            Eigen::VectorXd g(n);
            for (auto& p : out) {
              for (Eigen::Index j = 0; j < n; ++j) g(j) = noise.normal();
              const Eigen::VectorXd z = d.noise_factor * g;
              for (Eigen::Index j = 0; j < n; ++j) p[static_cast<std::size_t>(j)] += z(j);
            }
            return out;
          },
      },
      spec.variant());
}

// ---------------------------------------------------------------------------
// Isotropization

Isotropization isotropize(const std::vector<Point>& points) {
  if (points.empty()) throw std::invalid_argument("isotropize: empty sample");
  const std::size_t n = points.front().size();
  require_positive_dimension(n);
  if (points.size() < n + 1) {
    throw std::invalid_argument("isotropize: needs at least n + 1 points");
  }
  const auto en = static_cast<Eigen::Index>(n);
  const double count = static_cast<double>(points.size());

  std::vector<KahanSum> sums(n);
  for (const auto& p : points) {
    require_same_dimension(n, p.size(), "isotropize");
    for (std::size_t j = 0; j < n; ++j) sums[j] += p[j];
  }
  Eigen::VectorXd mu(en);
  for (std::size_t j = 0; j < n; ++j) {
    mu(static_cast<Eigen::Index>(j)) = sums[j].value() / count;
  }

  std::vector<KahanSum> csum(n * n);
  for (const auto& p : points) {
    for (std::size_t a = 0; a < n; ++a) {
      const double da = p[a] - mu(static_cast<Eigen::Index>(a));
      for (std::size_t b = a; b < n; ++b) {
        csum[a * n + b] += da * (p[b] - mu(static_cast<Eigen::Index>(b)));
      }
    }
  }
  Eigen::MatrixXd cov(en, en);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      const double v = csum[a * n + b].value() / count;
      cov(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
      cov(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = v;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kConditionLimit) {
    throw std::invalid_argument(
        "isotropize: empirical covariance is rank deficient (condition > 1e12)");
  }
  const Eigen::VectorXd inv_roots = eig.eigenvalues().cwiseSqrt().cwiseInverse();
  Isotropization out;
  out.map.matrix = eig.eigenvectors() * inv_roots.asDiagonal() *
                   eig.eigenvectors().transpose();
  out.map.shift = -out.map.matrix * mu;
  out.points.reserve(points.size());
  for (const auto& p : points) out.points.push_back(out.map.apply(p));
  return out;
}

// ---------------------------------------------------------------------------
// k-wise independent distributions

Point cube_point(std::uint64_t bits, std::size_t n) {
  Point x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = ((bits >> j) & 1u) != 0 ? 1.0 : -1.0;
  return x;
}

double max_parity_bias(const FiniteDistribution& dist, int k) {
  const std::size_t n = dist.dimension();
  double worst = 0.0;
  for (const auto& idx : enumerate_multilinear_indices(k, n)) {
    if (idx.degree() == 0) continue;
    const double bias = dist.expectation([&](const Point& x) { return idx.monomial(x); });
    worst = std::max(worst, std::abs(bias));
  }
  return worst;
}

namespace {

// Re-solves the moment equations restricted to the current support so the
// probabilities are exact to working precision.
std::vector<double> polish_kwise(const std::vector<Point>& support,
                                 const std::vector<MultiIndex>& rows) {
  const auto m = static_cast<Eigen::Index>(rows.size());
  const auto s = static_cast<Eigen::Index>(support.size());
  Eigen::MatrixXd a(m, s);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < s; ++j) {
      a(i, j) = rows[static_cast<std::size_t>(i)].monomial(support[static_cast<std::size_t>(j)]);
    }
    if (rows[static_cast<std::size_t>(i)].degree() == 0) b(i) = 1.0;
  }
  const Eigen::VectorXd p = a.colPivHouseholderQr().solve(b);
  return std::vector<double>(p.data(), p.data() + p.size());
}

}  // namespace

FiniteDistribution kwise_construct(std::size_t n, int k, std::uint64_t seed) {
  require_positive_dimension(n);
  if (n > kMaxKwiseDimension) {
    throw std::invalid_argument("kwise_construct: n must be <= 16");
  }
  if (k < 0 || static_cast<std::size_t>(k) > n) {
    throw std::invalid_argument("kwise_construct: need 0 <= k <= n");
  }
  const std::uint64_t size = std::uint64_t{1} << n;
  std::vector<Point> cube;
  cube.reserve(size);
  for (std::uint64_t b = 0; b < size; ++b) cube.push_back(cube_point(b, n));

  FiniteDistribution result = [&] {
    if (static_cast<std::size_t>(k) == n) {
      // All 2^n - 1 parities vanish: the moment system has the uniform
      // distribution as its only solution.
      return FiniteDistribution::uniform(cube);
    }
    const std::vector<MultiIndex> rows = enumerate_multilinear_indices(k, n);
    if (rows.size() * size > kMaxKwiseEntries) {
      throw std::length_error("kwise_construct: moment LP too large for the dense solver");
    }
    Rng rng(seed);
    std::vector<double> costs(size);
    for (auto& c : costs) c = rng.uniform();
    lp::LinearProgram program(lp::Sense::kMinimize, std::move(costs));
    for (const auto& idx : rows) {
      std::vector<double> row(size);
      for (std::uint64_t b = 0; b < size; ++b) row[b] = idx.monomial(cube[b]);
      program.add_constraint(std::move(row), lp::Relation::kEqual,
                             idx.degree() == 0 ? 1.0 : 0.0);
    }
    const lp::LPSolution sol = lp::solve(program);
    if (!sol.optimal()) {
      throw SolverError(std::string("kwise_construct: internal LP failure (") +
                        lp::to_string(sol.status) + ": " + sol.diagnostics + ")");
    }
    FiniteDistribution d = FiniteDistribution::from_weights(cube, sol.x);
    if (max_parity_bias(d, k) > kMassTolerance) {
      std::vector<Point> support = d.support();
      std::vector<double> polished = polish_kwise(support, rows);
      d = FiniteDistribution::from_weights(std::move(support), std::move(polished));
    }
    return d;
  }();

  const double bias = max_parity_bias(result, k);
  if (bias > kMassTolerance) {
    throw SolverError("kwise_construct: moment verification failed (bias " +
                      std::to_string(bias) + ")");
  }
  return result;
}

}  // namespace momatch
