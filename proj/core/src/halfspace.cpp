#include "momatch/halfspace.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "momatch/errors.hpp"

namespace momatch {

Halfspace::Halfspace(std::vector<double> normal, double threshold)
    : normal_(std::move(normal)), threshold_(threshold) {
  if (normal_.empty()) throw std::invalid_argument("Halfspace: empty normal");
  double norm_sq = 0.0;
  for (double v : normal_) {
    if (!std::isfinite(v)) throw std::invalid_argument("Halfspace: non-finite normal");
    norm_sq += v * v;
  }
  if (!std::isfinite(threshold_)) {
    throw std::invalid_argument("Halfspace: non-finite threshold");
  }
  if (norm_sq == 0.0) throw std::invalid_argument("Halfspace: zero normal");
  const double norm = std::sqrt(norm_sq);
  for (double& v : normal_) v /= norm;
  threshold_ /= norm;
}

double Halfspace::margin(std::span<const double> x) const {
  require_same_dimension(normal_.size(), x.size(), "Halfspace");
  double s = 0.0;
  for (std::size_t j = 0; j < normal_.size(); ++j) s += normal_[j] * x[j];
  return s;
}

int Halfspace::classify(std::span<const double> x) const {
  return sign_of(margin(x) - threshold_);
}

HalfspaceFunction::HalfspaceFunction(std::vector<Halfspace> halfspaces,
                                     std::vector<int> truth_table)
    : halfspaces_(std::move(halfspaces)), truth_table_(std::move(truth_table)) {
  if (halfspaces_.empty()) {
    throw std::invalid_argument("HalfspaceFunction: needs at least one halfspace");
  }
  if (halfspaces_.size() > 20) {
    throw std::invalid_argument("HalfspaceFunction: at most 20 halfspaces");
  }
  for (const auto& h : halfspaces_) {
    require_same_dimension(halfspaces_.front().dimension(), h.dimension(),
                           "HalfspaceFunction");
  }
  const std::size_t expected = std::size_t{1} << halfspaces_.size();
  if (truth_table_.size() != expected) {
    throw std::invalid_argument("HalfspaceFunction: truth table needs " +
                                std::to_string(expected) + " entries");
  }
  for (int v : truth_table_) {
    if (v != 1 && v != -1) {
      throw std::invalid_argument("HalfspaceFunction: truth table entries must be +-1");
    }
  }
}

HalfspaceFunction HalfspaceFunction::intersection(
    std::vector<Halfspace> halfspaces) {
  const std::size_t size = std::size_t{1} << halfspaces.size();
  std::vector<int> table(size, -1);
  table.back() = 1;
  return HalfspaceFunction(std::move(halfspaces), std::move(table));
}

HalfspaceFunction HalfspaceFunction::single(Halfspace h) {
  std::vector<Halfspace> hs;
  hs.push_back(std::move(h));
  return HalfspaceFunction(std::move(hs), {-1, 1});
}

std::uint32_t HalfspaceFunction::pattern(std::span<const double> x) const {
  std::uint32_t bits = 0;
  for (std::size_t r = 0; r < halfspaces_.size(); ++r) {
    if (halfspaces_[r].classify(x) == 1) bits |= (1u << r);
  }
  return bits;
}

int HalfspaceFunction::evaluate(std::span<const double> x) const {
  return truth_table_[pattern(x)];
}

std::vector<double> HalfspaceFunction::margins(std::span<const double> x) const {
  std::vector<double> out;
  out.reserve(halfspaces_.size());
  for (const auto& h : halfspaces_) out.push_back(h.margin(x));
  return out;
}

}  // namespace momatch
