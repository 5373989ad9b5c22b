#include "momatch/polynomial.hpp"

#include <cmath>
#include <stdexcept>

#include "momatch/errors.hpp"

namespace momatch {

Polynomial::Polynomial(std::size_t dimension) : dimension_(dimension) {
  if (dimension_ == 0) throw std::invalid_argument("Polynomial: dimension 0");
}

Polynomial::Polynomial(std::size_t dimension, Terms terms)
    : Polynomial(dimension) {
  for (auto& [idx, a] : terms) {
    require_same_dimension(dimension_, idx.dimension(), "Polynomial");
    if (!std::isfinite(a)) {
      throw std::invalid_argument("Polynomial: non-finite coefficient");
    }
    if (a != 0.0) terms_.emplace(idx, a);
  }
}

Polynomial Polynomial::constant(std::size_t dimension, double value) {
  Terms t;
  t.emplace(MultiIndex::zero(dimension), value);
  return Polynomial(dimension, std::move(t));
}

Polynomial Polynomial::from_coefficients(std::span<const MultiIndex> basis,
                                         std::span<const double> coefficients) {
  if (basis.empty() || basis.size() != coefficients.size()) {
    throw std::invalid_argument("Polynomial::from_coefficients: size mismatch");
  }
  Terms t;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (coefficients[i] != 0.0) t[basis[i]] += coefficients[i];
  }
  return Polynomial(basis.front().dimension(), std::move(t));
}

int Polynomial::degree() const {
  // Terms are graded-lex ordered, so the last key has the largest degree.
  return terms_.empty() ? 0 : terms_.rbegin()->first.degree();
}

bool Polynomial::is_multilinear() const {
  for (const auto& [idx, a] : terms_) {
    if (!idx.is_multilinear()) return false;
  }
  return true;
}

double Polynomial::coefficient(const MultiIndex& index) const {
  const auto it = terms_.find(index);
  return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::evaluate(std::span<const double> x) const {
  require_same_dimension(dimension_, x.size(), "Polynomial::evaluate");
  double sum = 0.0;
  for (const auto& [idx, a] : terms_) sum += a * idx.monomial(x);
  return sum;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  require_same_dimension(dimension_, other.dimension_, "Polynomial::operator+");
  Terms t = terms_;
  for (const auto& [idx, a] : other.terms_) t[idx] += a;
  return Polynomial(dimension_, std::move(t));
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
  return *this + (-other);
}

Polynomial Polynomial::operator-() const { return *this * -1.0; }

Polynomial Polynomial::operator*(double scale) const {
  Terms t;
  for (const auto& [idx, a] : terms_) t.emplace(idx, a * scale);
  return Polynomial(dimension_, std::move(t));
}

double regularity(const Polynomial& p) {
  if (!p.is_multilinear() || p.degree() > 2) {
    throw std::invalid_argument(
        "regularity: requires a multilinear polynomial of degree <= 2");
  }
  const std::size_t n = p.dimension();
  std::vector<double> influence(n, 0.0);
  double norm_sq = 0.0;
  for (const auto& [idx, a] : p.terms()) {
    if (idx.degree() == 0) continue;
    const double w = a * a;
    norm_sq += w;
    for (std::size_t i = 0; i < n; ++i) {
      if (idx.contains(i)) influence[i] += w;
    }
  }
  if (norm_sq == 0.0) {
    throw std::invalid_argument("regularity: polynomial has no non-constant part");
  }
  double sum_sq = 0.0;
  for (double inf : influence) sum_sq += inf * inf;
  return std::sqrt(sum_sq) / norm_sq;
}

}  // namespace momatch
