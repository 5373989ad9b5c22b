#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "momatch/multi_index.hpp"

namespace momatch {

// sign(0) := +1 throughout the library.
constexpr int sign_of(double v) { return v >= 0.0 ? 1 : -1; }

struct LabeledSample {
  Point point;
  int label = 1;  // -1 or +1
};

// x -> sign(<w, x> - theta), stored with ||w|| = 1.
class Halfspace {
 public:
  // Rescales (w, theta) by 1/||w||; rejects w = 0 or non-finite input.
  Halfspace(std::vector<double> normal, double threshold);

  std::size_t dimension() const { return normal_.size(); }
  std::span<const double> normal() const { return normal_; }
  double threshold() const { return threshold_; }

  double margin(std::span<const double> x) const;
  int classify(std::span<const double> x) const;

 private:
  std::vector<double> normal_;
  double threshold_;
};

// f(x) = g(h_1(x), ..., h_m(x)). The truth table is indexed by the sign
// pattern with bit r set iff h_r(x) = +1.
class HalfspaceFunction {
 public:
  HalfspaceFunction(std::vector<Halfspace> halfspaces,
                    std::vector<int> truth_table);

  static HalfspaceFunction intersection(std::vector<Halfspace> halfspaces);
  static HalfspaceFunction single(Halfspace h);

  std::size_t dimension() const { return halfspaces_.front().dimension(); }
  std::size_t num_halfspaces() const { return halfspaces_.size(); }
  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }
  const std::vector<int>& truth_table() const { return truth_table_; }

  std::uint32_t pattern(std::span<const double> x) const;
  int evaluate(std::span<const double> x) const;
  int operator()(std::span<const double> x) const { return evaluate(x); }

  // (<w_r, x>)_r, without subtracting thresholds.
  std::vector<double> margins(std::span<const double> x) const;

 private:
  std::vector<Halfspace> halfspaces_;
  std::vector<int> truth_table_;
};

}  // namespace momatch
