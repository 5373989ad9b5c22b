#include "momatch/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "momatch/errors.hpp"
#include "momatch/kahan.hpp"

namespace momatch {

namespace {

constexpr double kCountSlack = 1e-12;
constexpr std::size_t kMaxPatternDimension = 20;
constexpr std::size_t kMaxWindows = 10'000'000;

std::size_t common_dimension(const EmpiricalVector& x, const EmpiricalVector& y,
                             const char* what) {
  if (x.empty() || y.empty()) {
    throw std::invalid_argument(std::string(what) + ": empty sample");
  }
  const std::size_t m = x.front().size();
  if (m == 0) throw DimensionError(std::string(what) + ": zero-dimensional points");
  for (const auto& p : x) require_same_dimension(m, p.size(), what);
  for (const auto& p : y) require_same_dimension(m, p.size(), what);
  return m;
}

std::vector<double> sorted_copy(std::span<const double> v) {
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  return s;
}

double fraction_at_least(const std::vector<double>& sorted, double t) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), t);
  return static_cast<double>(sorted.end() - it) / static_cast<double>(sorted.size());
}

double fraction_below(const std::vector<double>& sorted, double t) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), t);
  return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

double fraction_at_most(const std::vector<double>& sorted, double t) {
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
  return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

double orthant_tail(const EmpiricalVector& v, std::span<const double> t) {
  std::size_t hits = 0;
  for (const auto& p : v) {
    bool inside = true;
    for (std::size_t j = 0; j < t.size() && inside; ++j) inside = p[j] >= t[j];
    hits += inside ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(v.size());
}

std::vector<double> column(const EmpiricalVector& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& p : v) out.push_back(p[0]);
  return out;
}

}  // namespace

double d_cdf(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw std::invalid_argument("d_cdf: empty sample");
  const std::vector<double> sx = sorted_copy(x);
  const std::vector<double> sy = sorted_copy(y);
  // Tails are left-continuous steps that change only at sample values.
  double best = 0.0;
  for (const auto* s : {&sx, &sy}) {
    for (double t : *s) {
      best = std::max(best, std::abs(fraction_at_least(sx, t) - fraction_at_least(sy, t)));
    }
  }
  return best;
}

double d_cdf(const EmpiricalVector& x, const EmpiricalVector& y, CdfGrid grid,
             std::size_t max_cells) {
  const std::size_t m = common_dimension(x, y, "d_cdf");
  if (m == 1) return d_cdf(column(x), column(y));

  double best = 0.0;
  if (grid == CdfGrid::kPooledPoints) {
    for (const auto* v : {&x, &y}) {
      for (const auto& t : *v) {
        best = std::max(best, std::abs(orthant_tail(x, t) - orthant_tail(y, t)));
      }
    }
    return best;
  }

  std::vector<std::vector<double>> axes(m);
  std::size_t cells = 1;
  for (std::size_t j = 0; j < m; ++j) {
    for (const auto* v : {&x, &y}) {
      for (const auto& p : *v) axes[j].push_back(p[j]);
    }
    std::sort(axes[j].begin(), axes[j].end());
    axes[j].erase(std::unique(axes[j].begin(), axes[j].end()), axes[j].end());
    if (cells > max_cells / axes[j].size()) {
      throw std::length_error("d_cdf: exact grid exceeds the cell cap");
    }
    cells *= axes[j].size();
  }
  std::vector<std::size_t> at(m, 0);
  Point t(m);
  while (true) {
    for (std::size_t j = 0; j < m; ++j) t[j] = axes[j][at[j]];
    best = std::max(best, std::abs(orthant_tail(x, t) - orthant_tail(y, t)));
    std::size_t j = 0;
    while (j < m && at[j] + 1 == axes[j].size()) at[j++] = 0;
    if (j == m) break;
    ++at[j];
  }
  return best;
}

double d_levy(std::span<const double> x, std::span<const double> y, double tolerance) {
  if (x.empty() || y.empty()) throw std::invalid_argument("d_levy: empty sample");
  if (!(tolerance > 0.0)) throw std::invalid_argument("d_levy: tolerance must be > 0");
  const std::vector<double> sx = sorted_copy(x);
  const std::vector<double> sy = sorted_copy(y);
  std::vector<double> values = sy;
  values.erase(std::unique(values.begin(), values.end()), values.end());

  // F_Y is constant on each (y_i, y_{i+1}], so both defining inequalities
  // only need checking at the distinct values of Y.
  auto feasible = [&](double eps) {
    for (double v : values) {
      if (fraction_at_most(sy, v) > fraction_at_most(sx, v + eps) + eps + kCountSlack) {
        return false;
      }
      if (fraction_below(sx, v - eps) > fraction_below(sy, v) + eps + kCountSlack) {
        return false;
      }
    }
    return true;
  };

  if (feasible(0.0)) return 0.0;
  double lo = 0.0;
  double hi = d_cdf(x, y);
  while (hi - lo > tolerance) {
    const double mid = lo + (hi - lo) / 2.0;
    if (feasible(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double d_levy(const EmpiricalVector& x, const EmpiricalVector& y, double tolerance) {
  const std::size_t m = common_dimension(x, y, "d_levy");
  if (m != 1) throw std::invalid_argument("d_levy: only m = 1 is supported");
  return d_levy(column(x), column(y), tolerance);
}

LambdaResult d_lambda(const EmpiricalVector& x, const EmpiricalVector& y,
                      const LambdaOptions& options) {
  const std::size_t m = common_dimension(x, y, "d_lambda");
  if (!(options.t_max > 0.0) || !(options.t_min > 0.0) || options.t_min > options.t_max ||
      options.num_t == 0) {
    throw std::invalid_argument("d_lambda: empty frequency grid");
  }
  std::size_t per_dim = options.points_per_dim;
  if (per_dim == 0) {
    per_dim = m == 1 ? 512
                     : std::max<std::size_t>(
                           3, static_cast<std::size_t>(std::pow(4096.0, 1.0 / static_cast<double>(m))));
  }
  if (per_dim < 2) throw std::invalid_argument("d_lambda: empty frequency grid");

  std::vector<double> ts(options.num_t);
  for (std::size_t k = 0; k < options.num_t; ++k) {
    const double frac = options.num_t == 1
                            ? 1.0
                            : static_cast<double>(k) / static_cast<double>(options.num_t - 1);
    ts[k] = options.t_min * std::pow(options.t_max / options.t_min, frac);
  }

  std::vector<Point> grid;
  if (m == 1) {
    for (std::size_t i = 0; i < per_dim; ++i) {
      grid.push_back({options.t_max * static_cast<double>(i) / static_cast<double>(per_dim - 1)});
    }
    for (double t : ts) grid.push_back({t});
  } else {
    std::vector<std::size_t> at(m, 0);
    Point t(m);
    while (true) {
      double norm_sq = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        t[j] = -options.t_max + 2.0 * options.t_max * static_cast<double>(at[j]) /
                                    static_cast<double>(per_dim - 1);
        norm_sq += t[j] * t[j];
      }
      if (std::sqrt(norm_sq) <= options.t_max) grid.push_back(t);
      std::size_t j = 0;
      while (j < m && at[j] + 1 == per_dim) at[j++] = 0;
      if (j == m) break;
      ++at[j];
    }
    std::vector<Point> directions;
    for (std::size_t j = 0; j < m; ++j) {
      Point e(m, 0.0);
      e[j] = 1.0;
      directions.push_back(e);
    }
    directions.emplace_back(m, 1.0 / std::sqrt(static_cast<double>(m)));
    for (double r : ts) {
      for (const auto& u : directions) {
        Point point(m);
        for (std::size_t j = 0; j < m; ++j) point[j] = r * u[j];
        grid.push_back(point);
      }
    }
  }

  auto char_fn = [](const EmpiricalVector& v, const Point& t, double& re, double& im) {
    KahanSum c;
    KahanSum s;
    for (const auto& p : v) {
      double dot = 0.0;
      for (std::size_t j = 0; j < t.size(); ++j) dot += t[j] * p[j];
      c += std::cos(dot);
      s += std::sin(dot);
    }
    re = c.value() / static_cast<double>(v.size());
    im = s.value() / static_cast<double>(v.size());
  };

  std::vector<std::pair<double, double>> norm_diff;  // (||t||, |phi_X - phi_Y|)
  norm_diff.reserve(grid.size());
  LambdaResult out;
  for (const auto& t : grid) {
    double xr, xi, yr, yi;
    char_fn(x, t, xr, xi);
    char_fn(y, t, yr, yi);
    double norm_sq = 0.0;
    for (double v : t) norm_sq += v * v;
    const double diff = std::hypot(xr - yr, xi - yi);
    norm_diff.emplace_back(std::sqrt(norm_sq), diff);
    out.max_char_diff = std::max(out.max_char_diff, diff);
  }
  std::sort(norm_diff.begin(), norm_diff.end());
  out.grid_points = norm_diff.size();

  out.value = std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  double running = 0.0;
  for (double big_t : ts) {
    while (pos < norm_diff.size() && norm_diff[pos].first <= big_t * (1.0 + 1e-12)) {
      running = std::max(running, norm_diff[pos].second);
      ++pos;
    }
    const double v = std::max(running, 1.0 / big_t);
    if (v < out.value) {
      out.value = v;
      out.best_t = big_t;
    }
  }
  return out;
}

std::vector<double> sign_pattern_distribution(const EmpiricalVector& v,
                                              std::span<const double> theta) {
  if (v.empty()) throw std::invalid_argument("sign_pattern_distribution: empty sample");
  const std::size_t m = theta.size();
  if (m == 0 || m > kMaxPatternDimension) {
    throw std::invalid_argument("sign_pattern_distribution: need 1 <= m <= 20");
  }
  std::vector<double> counts(std::size_t{1} << m, 0.0);
  for (const auto& p : v) {
    require_same_dimension(m, p.size(), "sign_pattern_distribution");
    std::size_t bits = 0;
    for (std::size_t r = 0; r < m; ++r) {
      if (p[r] - theta[r] >= 0.0) bits |= std::size_t{1} << r;
    }
    counts[bits] += 1.0;
  }
  for (auto& c : counts) c /= static_cast<double>(v.size());
  return counts;
}

double sign_pattern_tv(const EmpiricalVector& x, const EmpiricalVector& y,
                       std::span<const double> theta) {
  const std::vector<double> px = sign_pattern_distribution(x, theta);
  const std::vector<double> py = sign_pattern_distribution(y, theta);
  KahanSum sum;
  for (std::size_t s = 0; s < px.size(); ++s) sum += std::abs(px[s] - py[s]);
  return sum.value() / 2.0;
}

double max_signed_projection_cdf(const EmpiricalVector& x, const EmpiricalVector& y,
                                 CdfGrid grid) {
  const std::size_t m = common_dimension(x, y, "max_signed_projection_cdf");
  if (m > kMaxPatternDimension) {
    throw std::invalid_argument("max_signed_projection_cdf: m must be <= 20");
  }
  auto flip = [m](const EmpiricalVector& v, std::size_t mask) {
    EmpiricalVector out = v;
    for (auto& p : out) {
      for (std::size_t r = 0; r < m; ++r) {
        if ((mask >> r) & 1u) p[r] = -p[r];
      }
    }
    return out;
  };
  double best = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    best = std::max(best, d_cdf(flip(x, mask), flip(y, mask), grid));
  }
  return best;
}

std::vector<WindowMass> anticoncentration_probe(std::span<const double> samples,
                                                std::span<const double> alphas) {
  if (samples.empty()) throw std::invalid_argument("anticoncentration_probe: empty sample");
  const std::vector<double> s = sorted_copy(samples);
  const double lo = s.front();
  const double range = s.back() - lo;
  const double count = static_cast<double>(s.size());
  std::vector<WindowMass> out;
  for (double alpha : alphas) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
      throw std::invalid_argument("anticoncentration_probe: widths must be positive");
    }
    const double step = alpha / 10.0;
    const double steps = std::floor(range / step);
    if (steps + 1.0 > static_cast<double>(kMaxWindows)) {
      throw std::length_error("anticoncentration_probe: too many windows");
    }
    WindowMass w;
    w.alpha = alpha;
    w.windows = static_cast<std::size_t>(steps) + 1;
    for (std::size_t i = 0; i < w.windows; ++i) {
      const double t = lo + static_cast<double>(i) * step;
      const auto first = std::lower_bound(s.begin(), s.end(), t);
      const auto last = std::upper_bound(first, s.end(), t + alpha);
      const double mass = static_cast<double>(last - first) / count;
      if (mass > w.mass) {
        w.mass = mass;
        w.start = t;
      }
    }
    out.push_back(w);
  }
  return out;
}

}  // namespace momatch
