#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace momatch::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { kMinimize, kMaximize };
enum class Relation { kLessEqual, kEqual, kGreaterEqual };
enum class Status { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };

// Entering-variable rule. kBland takes the lowest-index improving column.
// kDantzig takes the most negative reduced cost and drops to Bland's rule
// while a run of degenerate pivots is in progress.
enum class PivotRule { kBland, kDantzig };
// kAuto runs the dual method when every row is an equality and every
// variable has two finite bounds, falling back to the primal method if it
// fails numerically; otherwise the two-phase primal method.
enum class Algorithm { kAuto, kPrimal, kDual };

const char* to_string(Status status);
const char* to_string(Relation relation);

// Dense LP: optimize c^T x subject to rows (a_i^T x REL b_i) and
// lower_j <= x_j <= upper_j. Variables default to [0, +inf).
class LinearProgram {
 public:
  LinearProgram(Sense sense, std::vector<double> objective);

  std::size_t add_constraint(std::vector<double> row, Relation relation,
                             double rhs);
  void set_bounds(std::size_t variable, double lower, double upper);

  Sense sense() const { return sense_; }
  std::size_t num_variables() const { return objective_.size(); }
  std::size_t num_constraints() const { return rows_.size(); }

  const std::vector<double>& objective() const { return objective_; }
  const std::vector<double>& row(std::size_t i) const { return rows_[i]; }
  Relation relation(std::size_t i) const { return relations_[i]; }
  double rhs(std::size_t i) const { return rhs_[i]; }
  double lower(std::size_t j) const { return lower_[j]; }
  double upper(std::size_t j) const { return upper_[j]; }

 private:
  Sense sense_;
  std::vector<double> objective_;
  std::vector<std::vector<double>> rows_;
  std::vector<Relation> relations_;
  std::vector<double> rhs_;
  std::vector<double> lower_;
  std::vector<double> upper_;
};

struct SolverOptions {
  Algorithm algorithm = Algorithm::kAuto;
  // Entering rule of the primal method.
  PivotRule rule = PivotRule::kBland;
  double feasibility_tolerance = 1e-9;
  double optimality_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  // Relative duality-gap bound checked before reporting kOptimal.
  double gap_tolerance = 1e-6;
  // 0 picks max(64, rows / 4).
  std::size_t refactor_interval = 0;
  // 0 picks a bound proportional to the problem size.
  std::size_t max_iterations = 0;
};

struct LPSolution {
  Status status = Status::kNumericalFailure;
  std::vector<double> x;
  // Row multipliers in the caller's sense: reduced_costs = c - A^T duals.
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  double objective = std::numeric_limits<double>::quiet_NaN();
  // b^T y plus bound terms chosen by the sign of each reduced cost.
  double dual_objective = std::numeric_limits<double>::quiet_NaN();
  // Max row or bound violation, each scaled by 1 + the row's term magnitude.
  double primal_residual = std::numeric_limits<double>::quiet_NaN();
  std::size_t iterations = 0;
  std::string diagnostics;

  bool optimal() const { return status == Status::kOptimal; }
};

LPSolution solve(const LinearProgram& program, const SolverOptions& options = {});

}  // namespace momatch::lp
