#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace momatch {

using Point = std::vector<double>;

// Exponent tuple I = (i_1, ..., i_n); x(I) = prod_j x_j^{i_j}.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents);

  static MultiIndex zero(std::size_t n);
  static MultiIndex unit(std::size_t n, std::size_t j, int power = 1);

  std::size_t dimension() const { return exponents_.size(); }
  int degree() const { return degree_; }
  int operator[](std::size_t j) const { return exponents_[j]; }
  std::span<const int> exponents() const { return exponents_; }

  bool is_multilinear() const;
  bool contains(std::size_t j) const { return exponents_[j] > 0; }

  // x(I), evaluated left to right over coordinates.
  double monomial(std::span<const double> x) const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> exponents_;
  int degree_ = 0;
};

// Graded lexicographic order: lower total degree first; within a degree,
// larger exponent in an earlier coordinate first. For n = 2, k = 2 this
// gives (0,0) (1,0) (0,1) (2,0) (1,1) (0,2).
struct GradedLexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

// All I with total degree <= k, in graded lexicographic order.
std::vector<MultiIndex> enumerate_multi_indices(int k, std::size_t n);

// Subsets of [n] of size <= k as 0/1 exponent vectors, graded-lex ordered.
std::vector<MultiIndex> enumerate_multilinear_indices(int k, std::size_t n);

// C(n + k, k).
std::size_t count_multi_indices(int k, std::size_t n);

// Position of `index` within a graded-lex sorted list, or npos.
std::size_t find_index(std::span<const MultiIndex> sorted,
                       const MultiIndex& index);

// Evaluates a fixed list of monomials at many points, reusing a table of
// coordinate powers per point.
class MonomialBasis {
 public:
  explicit MonomialBasis(std::vector<MultiIndex> indices);

  std::size_t size() const { return indices_.size(); }
  std::size_t dimension() const { return dimension_; }
  int max_degree() const { return max_degree_; }
  const std::vector<MultiIndex>& indices() const { return indices_; }

  void evaluate(std::span<const double> x, std::span<double> out) const;
  std::vector<double> evaluate(std::span<const double> x) const;

 private:
  std::vector<MultiIndex> indices_;
  std::size_t dimension_ = 0;
  int max_degree_ = 0;
};

}  // namespace momatch
