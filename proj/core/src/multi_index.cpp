#include "momatch/multi_index.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "momatch/errors.hpp"

namespace momatch {

void require_same_dimension(std::size_t expected, std::size_t actual,
                            const char* what) {
  if (expected != actual) {
    throw DimensionError(std::string(what) + ": expected dimension " +
                         std::to_string(expected) + ", got " +
                         std::to_string(actual));
  }
}

MultiIndex::MultiIndex(std::vector<int> exponents)
    : exponents_(std::move(exponents)) {
  for (int e : exponents_) {
    if (e < 0) throw std::invalid_argument("MultiIndex: negative exponent");
    degree_ += e;
  }
}

MultiIndex MultiIndex::zero(std::size_t n) {
  return MultiIndex(std::vector<int>(n, 0));
}

MultiIndex MultiIndex::unit(std::size_t n, std::size_t j, int power) {
  std::vector<int> e(n, 0);
  e.at(j) = power;
  return MultiIndex(std::move(e));
}

bool MultiIndex::is_multilinear() const {
  return std::all_of(exponents_.begin(), exponents_.end(),
                     [](int e) { return e <= 1; });
}

double MultiIndex::monomial(std::span<const double> x) const {
  require_same_dimension(exponents_.size(), x.size(), "MultiIndex::monomial");
  double v = 1.0;
  for (std::size_t j = 0; j < exponents_.size(); ++j) {
    for (int e = 0; e < exponents_[j]; ++e) v *= x[j];
  }
  return v;
}

bool GradedLexLess::operator()(const MultiIndex& a,
                               const MultiIndex& b) const {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  const auto ea = a.exponents();
  const auto eb = b.exponents();
  const std::size_t n = std::min(ea.size(), eb.size());
  for (std::size_t j = 0; j < n; ++j) {
    if (ea[j] != eb[j]) return ea[j] > eb[j];
  }
  return ea.size() < eb.size();
}

namespace {

// Compositions of `remaining` into coordinates [j, n), first coordinate
// taking its largest value first.
void compositions(std::vector<int>& current, std::size_t j, int remaining,
                  std::vector<MultiIndex>& out) {
  const std::size_t n = current.size();
  if (j + 1 == n) {
    current[j] = remaining;
    out.emplace_back(current);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[j] = e;
    compositions(current, j + 1, remaining - e, out);
  }
  current[j] = 0;
}

}  // namespace

std::vector<MultiIndex> enumerate_multi_indices(int k, std::size_t n) {
  if (k < 0) throw std::invalid_argument("enumerate_multi_indices: k < 0");
  if (n == 0) throw std::invalid_argument("enumerate_multi_indices: n == 0");
  std::vector<MultiIndex> out;
  out.reserve(count_multi_indices(k, n));
  std::vector<int> current(n, 0);
  for (int d = 0; d <= k; ++d) compositions(current, 0, d, out);
  return out;
}

std::vector<MultiIndex> enumerate_multilinear_indices(int k, std::size_t n) {
  std::vector<MultiIndex> out;
  for (const auto& idx : enumerate_multi_indices(std::min<int>(k, n), n)) {
    if (idx.is_multilinear()) out.push_back(idx);
  }
  return out;
}

std::size_t count_multi_indices(int k, std::size_t n) {
  if (k < 0) return 0;
  // C(n + k, k) computed incrementally; exact while it fits.
  std::size_t c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * (n + static_cast<std::size_t>(i)) / static_cast<std::size_t>(i);
  }
  return c;
}

std::size_t find_index(std::span<const MultiIndex> sorted,
                       const MultiIndex& index) {
  const auto it =
      std::lower_bound(sorted.begin(), sorted.end(), index, GradedLexLess{});
  if (it == sorted.end() || !(*it == index)) return static_cast<std::size_t>(-1);
  return static_cast<std::size_t>(it - sorted.begin());
}

MonomialBasis::MonomialBasis(std::vector<MultiIndex> indices)
    : indices_(std::move(indices)) {
  if (indices_.empty()) {
    throw std::invalid_argument("MonomialBasis: empty index list");
  }
  dimension_ = indices_.front().dimension();
  for (const auto& idx : indices_) {
    require_same_dimension(dimension_, idx.dimension(), "MonomialBasis");
    for (int e : idx.exponents()) max_degree_ = std::max(max_degree_, e);
  }
}

void MonomialBasis::evaluate(std::span<const double> x,
                             std::span<double> out) const {
  require_same_dimension(dimension_, x.size(), "MonomialBasis::evaluate");
  if (out.size() != indices_.size()) {
    throw std::invalid_argument("MonomialBasis::evaluate: output size");
  }
  const std::size_t stride = static_cast<std::size_t>(max_degree_) + 1;
  // powers[j * stride + e] = x_j^e
  thread_local std::vector<double> powers;
  powers.assign(dimension_ * stride, 1.0);
  for (std::size_t j = 0; j < dimension_; ++j) {
    for (std::size_t e = 1; e < stride; ++e) {
      powers[j * stride + e] = powers[j * stride + e - 1] * x[j];
    }
  }
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    const auto ex = indices_[i].exponents();
    double v = 1.0;
    for (std::size_t j = 0; j < dimension_; ++j) {
      if (ex[j] != 0) v *= powers[j * stride + static_cast<std::size_t>(ex[j])];
    }
    out[i] = v;
  }
}

std::vector<double> MonomialBasis::evaluate(std::span<const double> x) const {
  std::vector<double> out(indices_.size());
  evaluate(x, out);
  return out;
}

}  // namespace momatch
