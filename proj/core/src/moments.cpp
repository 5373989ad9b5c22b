#include "momatch/moments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "momatch/errors.hpp"
#include "momatch/kahan.hpp"

namespace momatch {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr int kMaxDirectionalOrder = 12;
constexpr int kMaxEmpiricalBetaOrder = 20;

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double double_factorial_odd(int e) {  // (e - 1)!! for even e
  double r = 1.0;
  for (int i = e - 1; i > 1; i -= 2) r *= i;
  return r;
}

double gaussian_1d(int e) { return e % 2 != 0 ? 0.0 : double_factorial_odd(e); }

double uniform_cube_1d(int e) { return e % 2 != 0 ? 0.0 : 1.0 / (e + 1.0); }

double rademacher_1d(int e) { return e % 2 != 0 ? 0.0 : 1.0; }

double laplace_1d(int e, double scale) {
  if (e % 2 != 0) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= e; ++i) r *= i * scale;
  return r;
}

// E[prod_j x_j^{2 a_j}] for X uniform on the unit ball of R^n.
double ball_moment(std::span<const int> exponents) {
  const double n = static_cast<double>(exponents.size());
  double half_total = 0.0;
  double log_num = std::lgamma(n / 2.0);
  for (int e : exponents) {
    if (e % 2 != 0) return 0.0;
    const double a = e / 2.0;
    half_total += a;
    log_num += std::lgamma(a + 0.5) - std::lgamma(0.5);
  }
  if (half_total == 0.0) return 1.0;
  return n / (n + 2.0 * half_total) *
         std::exp(log_num - std::lgamma(n / 2.0 + half_total));
}

void require_sorted_with_zero(std::size_t n, const std::vector<MultiIndex>& indices) {
  if (indices.empty() || indices.front() != MultiIndex::zero(n)) {
    throw std::invalid_argument("moment index set must start with the zero index");
  }
  GradedLexLess less;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    require_same_dimension(n, indices[i].dimension(), "moment index set");
    if (i > 0 && !less(indices[i - 1], indices[i])) {
      throw std::invalid_argument("moment index set must be strictly graded-lex sorted");
    }
  }
}

// Moments of N(0, cov) by Stein's identity
//   E[Z^L] = sum_b cov(a, b) (L - e_a)_b E[Z^{L - e_a - e_b}],
// a the first coordinate with L_a > 0.
class GaussianMoments {
 public:
  explicit GaussianMoments(Eigen::MatrixXd cov) : cov_(std::move(cov)) {}

  double operator()(std::vector<int> l) {
    auto it = memo_.find(l);
    if (it != memo_.end()) return it->second;
    int total = 0;
    for (int e : l) total += e;
    double value = 0.0;
    if (total == 0) {
      value = 1.0;
    } else if (total % 2 == 0) {
      const auto a = static_cast<std::size_t>(
          std::find_if(l.begin(), l.end(), [](int e) { return e > 0; }) - l.begin());
      std::vector<int> rest = l;
      --rest[a];
      KahanSum sum;
      for (std::size_t b = 0; b < rest.size(); ++b) {
        if (rest[b] == 0) continue;
        const double c = cov_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        if (c == 0.0) continue;
        std::vector<int> next = rest;
        --next[b];
        sum += c * rest[b] * (*this)(std::move(next));
      }
      value = sum.value();
    }
    memo_.emplace(std::move(l), value);
    return value;
  }

 private:
  Eigen::MatrixXd cov_;
  std::map<std::vector<int>, double> memo_;
};

double finite_monomial(const FiniteDistribution& d, const MultiIndex& idx) {
  return d.expectation([&](const Point& x) { return idx.monomial(x); });
}

// E[(X + Z)^I] by expanding each coordinate binomially.
std::vector<double> smoothed_moments(const Smoothed& s,
                                     const std::vector<MultiIndex>& indices) {
  const std::size_t n = s.inner->dimension();
  int top = 0;
  for (const auto& idx : indices) top = std::max(top, idx.degree());
  const std::vector<MultiIndex> all = enumerate_multi_indices(top, n);
  const MomentVector inner = exact_moments(*s.inner, all);
  GaussianMoments noise(s.noise_cov);

  std::vector<double> out;
  out.reserve(indices.size());
  std::vector<int> j(n);
  for (const auto& idx : indices) {
    KahanSum sum;
    std::fill(j.begin(), j.end(), 0);
    // Odometer over 0 <= j <= idx.
    while (true) {
      double weight = 1.0;
      std::vector<int> rest(n);
      for (std::size_t c = 0; c < n; ++c) {
        weight *= binomial(idx[c], j[c]);
        rest[c] = idx[c] - j[c];
      }
      const double zm = noise(rest);
      if (zm != 0.0) {
        sum += weight * inner.at(MultiIndex(j)) * zm;
      }
      std::size_t c = 0;
      while (c < n && j[c] == idx[c]) j[c++] = 0;
      if (c == n) break;
      ++j[c];
    }
    out.push_back(sum.value());
  }
  return out;
}

template <class OneD>
std::vector<double> product_moments(const std::vector<MultiIndex>& indices, OneD m) {
  std::vector<double> out;
  out.reserve(indices.size());
  for (const auto& idx : indices) {
    double v = 1.0;
    for (int e : idx.exponents()) {
      v *= m(e);
      if (v == 0.0) break;
    }
    out.push_back(v);
  }
  return out;
}

template <class OneD>
std::vector<double> product_directional(std::span<const double> w, int r, OneD m) {
  std::vector<double> s(static_cast<std::size_t>(r) + 1, 0.0);
  s[0] = 1.0;
  std::vector<double> t(s.size());
  for (double wj : w) {
    for (int a = 0; a <= r; ++a) {
      double acc = 0.0;
      for (int b = 0; b <= a; ++b) {
        const double mb = m(a - b);
        if (mb == 0.0) continue;
        acc += binomial(a, b) * s[static_cast<std::size_t>(b)] * std::pow(wj, a - b) * mb;
      }
      t[static_cast<std::size_t>(a)] = acc;
    }
    s.swap(t);
  }
  return s;
}

std::vector<double> finite_directional(const FiniteDistribution& d,
                                       std::span<const double> w, int r) {
  std::vector<double> out;
  for (int a = 0; a <= r; ++a) {
    out.push_back(d.expectation([&](const Point& x) {
      double dot = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) dot += w[j] * x[j];
      return std::pow(dot, a);
    }));
  }
  return out;
}

double norm_of(std::span<const double> w) {
  double s = 0.0;
  for (double v : w) s += v * v;
  return std::sqrt(s);
}

BetaProfile assemble_profile(std::vector<double> mu_2j, double mu2) {
  BetaProfile out;
  out.mu_2j = std::move(mu_2j);
  double acc = 0.0;
  for (std::size_t i = 0; i < out.mu_2j.size(); ++i) {
    const int j = static_cast<int>(i) + 1;
    if (!(out.mu_2j[i] > 0.0)) {
      throw std::invalid_argument("beta_profile: vanishing directional moment");
    }
    acc += std::pow(out.mu_2j[i], -1.0 / (2.0 * j));
    out.j.push_back(j);
    out.beta.push_back(acc);
  }
  out.mu2_root = std::sqrt(mu2);
  return out;
}

std::vector<Point> normalized_directions(const std::vector<Point>& directions,
                                         std::size_t n) {
  if (directions.empty()) {
    throw std::invalid_argument("beta_profile: empty direction set");
  }
  std::vector<Point> out;
  for (const auto& w : directions) {
    require_same_dimension(n, w.size(), "beta_profile direction");
    const double norm = norm_of(w);
    if (!(norm > 0.0)) throw std::invalid_argument("beta_profile: zero direction");
    Point u = w;
    for (auto& v : u) v /= norm;
    out.push_back(std::move(u));
  }
  return out;
}

double absolute_moment(const std::vector<Point>& points, std::span<const double> w,
                       int r) {
  KahanSum sum;
  for (const auto& x : points) {
    require_same_dimension(w.size(), x.size(), "directional_moment");
    double dot = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) dot += w[j] * x[j];
    sum += std::pow(std::abs(dot), r);
  }
  return sum.value() / static_cast<double>(points.size());
}

}  // namespace

// ---------------------------------------------------------------------------

MomentVector::MomentVector(std::size_t n, int k, std::vector<MultiIndex> indices,
                           std::vector<double> values)
    : n_(n), k_(k), indices_(std::move(indices)), values_(std::move(values)) {
  if (n_ == 0) throw std::invalid_argument("MomentVector: dimension must be >= 1");
  if (k_ < 0) throw std::invalid_argument("MomentVector: order must be >= 0");
  require_sorted_with_zero(n_, indices_);
  if (indices_.size() != values_.size()) {
    throw std::invalid_argument("MomentVector: index/value size mismatch");
  }
  if (indices_.back().degree() > k_) {
    throw std::invalid_argument("MomentVector: index exceeds the order");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("MomentVector: non-finite value");
  }
  if (std::abs(values_.front() - 1.0) > 1e-12) {
    throw std::invalid_argument("MomentVector: sigma of the empty index must be 1");
  }
}

double MomentVector::at(const MultiIndex& index) const {
  const std::size_t pos = find_index(indices_, index);
  if (pos == static_cast<std::size_t>(-1)) {
    throw std::out_of_range("MomentVector::at: index not in the set");
  }
  return values_[pos];
}

bool MomentVector::contains(const MultiIndex& index) const {
  return find_index(indices_, index) != static_cast<std::size_t>(-1);
}

MomentVector empirical_moments(const std::vector<Point>& points, int k) {
  if (points.empty()) throw std::invalid_argument("empirical_moments: empty sample");
  if (k < 0) throw std::invalid_argument("empirical_moments: k must be >= 0");
  return empirical_moments(points, enumerate_multi_indices(k, points.front().size()));
}

MomentVector empirical_moments(const std::vector<Point>& points,
                               std::vector<MultiIndex> indices) {
  if (points.empty()) throw std::invalid_argument("empirical_moments: empty sample");
  const std::size_t n = points.front().size();
  require_sorted_with_zero(n, indices);
  const int k = indices.back().degree();
  MonomialBasis basis(indices);
  std::vector<KahanSum> sums(basis.size());
  std::vector<double> row(basis.size());
  for (const auto& x : points) {
    require_same_dimension(n, x.size(), "empirical_moments");
    basis.evaluate(x, row);
    for (std::size_t i = 0; i < row.size(); ++i) sums[i] += row[i];
  }
  std::vector<double> values(basis.size());
  const double count = static_cast<double>(points.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = sums[i].value() / count;
  values[0] = 1.0;
  return MomentVector(n, k, basis.indices(), std::move(values));
}

MomentVector exact_moments(const DistributionSpec& spec, int k) {
  if (k < 0) throw std::invalid_argument("exact_moments: k must be >= 0");
  return exact_moments(spec, enumerate_multi_indices(k, spec.dimension()));
}

MomentVector exact_moments(const DistributionSpec& spec,
                           std::vector<MultiIndex> indices) {
  const std::size_t n = spec.dimension();
  require_sorted_with_zero(n, indices);
  const int k = indices.back().degree();
  std::vector<double> values = std::visit(
      Overloaded{
          [&](const StandardGaussian&) { return product_moments(indices, gaussian_1d); },
          [&](const UniformCube&) { return product_moments(indices, uniform_cube_1d); },
          [&](const RademacherCube&) { return product_moments(indices, rademacher_1d); },
          [&](const LaplaceProduct& d) {
            return product_moments(indices, [&](int e) { return laplace_1d(e, d.scale); });
          },
          [&](const UniformBall&) {
            std::vector<double> out;
            for (const auto& idx : indices) out.push_back(ball_moment(idx.exponents()));
            return out;
          },
          [&](const FiniteSupport& d) {
            std::vector<double> out;
            for (const auto& idx : indices) out.push_back(finite_monomial(*d.dist, idx));
            return out;
          },
          [&](const KWise& d) {
            std::vector<double> out;
            for (const auto& idx : indices) out.push_back(finite_monomial(*d.dist, idx));
            return out;
          },
          [&](const Smoothed& d) { return smoothed_moments(d, indices); },
      },
      spec.variant());
  values[0] = 1.0;
  return MomentVector(n, k, std::move(indices), std::move(values));
}

MomentVector uniform_cube_parities(std::size_t n, int k) {
  std::vector<MultiIndex> indices = enumerate_multilinear_indices(k, n);
  std::vector<double> values(indices.size(), 0.0);
  values[0] = 1.0;
  return MomentVector(n, k, std::move(indices), std::move(values));
}

double directional_moment(const std::vector<Point>& points,
                          std::span<const double> w, int r) {
  if (points.empty()) throw std::invalid_argument("directional_moment: empty sample");
  if (r < 1 || r > kMaxDirectionalOrder) {
    throw std::invalid_argument("directional_moment: r must lie in [1, 12]");
  }
  if (std::abs(norm_of(w) - 1.0) > 1e-9) {
    throw std::invalid_argument("directional_moment: w must be a unit vector");
  }
  return absolute_moment(points, w, r);
}

std::vector<double> exact_directional_moments(const DistributionSpec& spec,
                                              std::span<const double> w, int r) {
  require_same_dimension(spec.dimension(), w.size(), "exact_directional_moments");
  if (r < 0) throw std::invalid_argument("exact_directional_moments: r must be >= 0");
  const double norm = norm_of(w);
  auto scaled = [&](auto m) {
    std::vector<double> out;
    for (int a = 0; a <= r; ++a) out.push_back(std::pow(norm, a) * m(a));
    return out;
  };
  return std::visit(
      Overloaded{
          [&](const StandardGaussian&) { return scaled(gaussian_1d); },
          [&](const UniformBall&) {
            return scaled([&](int a) {
              std::vector<int> e(w.size(), 0);
              e[0] = a;
              return ball_moment(e);
            });
          },
          [&](const UniformCube&) { return product_directional(w, r, uniform_cube_1d); },
          [&](const RademacherCube&) { return product_directional(w, r, rademacher_1d); },
          [&](const LaplaceProduct& d) {
            return product_directional(w, r, [&](int e) { return laplace_1d(e, d.scale); });
          },
          [&](const FiniteSupport& d) { return finite_directional(*d.dist, w, r); },
          [&](const KWise& d) { return finite_directional(*d.dist, w, r); },
          [&](const Smoothed& d) {
            const std::vector<double> inner = exact_directional_moments(*d.inner, w, r);
            const Eigen::Map<const Eigen::VectorXd> v(w.data(),
                                                      static_cast<Eigen::Index>(w.size()));
            const double var = v.dot(d.noise_cov * v);
            std::vector<double> out;
            for (int a = 0; a <= r; ++a) {
              KahanSum sum;
              for (int b = 0; b <= a; b += 2) {
                sum += binomial(a, b) * std::pow(var, b / 2.0) * double_factorial_odd(b) *
                       inner[static_cast<std::size_t>(a - b)];
              }
              out.push_back(sum.value());
            }
            return out;
          },
      },
      spec.variant());
}

BetaProfile beta_profile(const std::vector<Point>& points,
                         const std::vector<Point>& directions, int k) {
  if (points.empty()) throw std::invalid_argument("beta_profile: empty sample");
  if (k < 1 || k > kMaxEmpiricalBetaOrder) {
    throw std::invalid_argument("beta_profile: k must lie in [1, 20] on samples");
  }
  const auto dirs = normalized_directions(directions, points.front().size());
  std::vector<double> mu(static_cast<std::size_t>(k), 0.0);
  double mu2 = 0.0;
  for (const auto& w : dirs) {
    for (int j = 1; j <= k; ++j) {
      auto& slot = mu[static_cast<std::size_t>(j - 1)];
      slot = std::max(slot, absolute_moment(points, w, 2 * j));
    }
  }
  mu2 = mu[0];
  return assemble_profile(std::move(mu), mu2);
}

BetaProfile beta_profile(const DistributionSpec& spec,
                         const std::vector<Point>& directions, int k) {
  if (k < 1) throw std::invalid_argument("beta_profile: k must be >= 1");
  const auto dirs = normalized_directions(directions, spec.dimension());
  std::vector<double> mu(static_cast<std::size_t>(k), 0.0);
  for (const auto& w : dirs) {
    const std::vector<double> m = exact_directional_moments(spec, w, 2 * k);
    for (int j = 1; j <= k; ++j) {
      auto& slot = mu[static_cast<std::size_t>(j - 1)];
      slot = std::max(slot, m[static_cast<std::size_t>(2 * j)]);
    }
  }
  const double mu2 = mu[0];
  return assemble_profile(std::move(mu), mu2);
}

Point random_unit_vector(std::size_t n, Rng& rng) {
  Point w(n);
  double norm = 0.0;
  do {
    for (auto& v : w) v = rng.normal();
    norm = norm_of(w);
  } while (norm == 0.0);
  for (auto& v : w) v /= norm;
  return w;
}

std::vector<Point> probe_directions(std::vector<Point> base, std::size_t n,
                                    std::size_t random_count, std::uint64_t seed) {
  std::vector<Point> out;
  if (!base.empty()) out = normalized_directions(base, n);
  Rng rng(seed);
  for (std::size_t i = 0; i < random_count; ++i) out.push_back(random_unit_vector(n, rng));
  return out;
}

}  // namespace momatch
