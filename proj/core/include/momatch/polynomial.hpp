#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "momatch/multi_index.hpp"

namespace momatch {

// Real polynomial sum_I a_I x(I) over a fixed dimension. Zero coefficients
// are never stored; terms iterate in graded lexicographic order.
class Polynomial {
 public:
  using Terms = std::map<MultiIndex, double, GradedLexLess>;

  explicit Polynomial(std::size_t dimension);
  Polynomial(std::size_t dimension, Terms terms);

  static Polynomial constant(std::size_t dimension, double value);
  static Polynomial from_coefficients(std::span<const MultiIndex> basis,
                                      std::span<const double> coefficients);

  std::size_t dimension() const { return dimension_; }
  // Max total degree among stored terms; 0 for the zero polynomial.
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  bool is_multilinear() const;
  std::size_t num_terms() const { return terms_.size(); }
  const Terms& terms() const { return terms_; }
  double coefficient(const MultiIndex& index) const;

  double evaluate(std::span<const double> x) const;
  double operator()(std::span<const double> x) const { return evaluate(x); }

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator-() const;
  Polynomial operator*(double scale) const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::size_t dimension_;
  Terms terms_;
};

inline Polynomial operator*(double scale, const Polynomial& p) {
  return p * scale;
}

// Smallest delta with sum_i Inf_i^2 <= delta^2 * ||P||_2^4, where
// Inf_i = sum_{I containing i} a_I^2 and ||P||_2^2 sums a_I^2 over non-empty I.
// Requires a multilinear polynomial of degree <= 2 with a non-constant part.
double regularity(const Polynomial& p);

}  // namespace momatch
