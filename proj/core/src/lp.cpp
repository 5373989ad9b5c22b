#include "momatch/lp.hpp"

#include "momatch/rng.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace momatch::lp {

const char* to_string(Status status) {
  switch (status) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
    case Status::kNumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

const char* to_string(Relation relation) {
  switch (relation) {
    case Relation::kLessEqual: return "le";
    case Relation::kEqual: return "eq";
    case Relation::kGreaterEqual: return "ge";
  }
  return "unknown";
}

LinearProgram::LinearProgram(Sense sense, std::vector<double> objective)
    : sense_(sense),
      objective_(std::move(objective)),
      lower_(objective_.size(), 0.0),
      upper_(objective_.size(), kInfinity) {
  if (objective_.empty()) {
    throw std::invalid_argument("LinearProgram: no variables");
  }
  for (double c : objective_) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument("LinearProgram: non-finite objective");
    }
  }
}

std::size_t LinearProgram::add_constraint(std::vector<double> row,
                                          Relation relation, double rhs) {
  if (row.size() != objective_.size()) {
    throw std::invalid_argument("LinearProgram: row length mismatch");
  }
  for (double a : row) {
    if (!std::isfinite(a)) {
      throw std::invalid_argument("LinearProgram: non-finite coefficient");
    }
  }
  if (!std::isfinite(rhs)) {
    throw std::invalid_argument("LinearProgram: non-finite rhs");
  }
  rows_.push_back(std::move(row));
  relations_.push_back(relation);
  rhs_.push_back(rhs);
  return rows_.size() - 1;
}

void LinearProgram::set_bounds(std::size_t variable, double lower,
                               double upper) {
  if (variable >= objective_.size()) {
    throw std::out_of_range("LinearProgram::set_bounds: variable index");
  }
  if (std::isnan(lower) || std::isnan(upper) || lower > upper ||
      lower == kInfinity || upper == -kInfinity) {
    throw std::invalid_argument("LinearProgram::set_bounds: invalid bounds");
  }
  lower_[variable] = lower;
  upper_[variable] = upper;
}

namespace {

enum class VarState { kBasic, kAtLower, kAtUpper, kFreeZero };

constexpr double kCostPerturbation = 1e-6;

// Columns are laid out as [structural | slack | artificial]. The internal
// problem is always a minimization.
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SolverOptions& options)
      : lp_(lp), opt_(options) {
    build();
  }

  LPSolution run();
  LPSolution run_dual();

 private:
  bool dual_iterate(Status& status);
  void flip_to_dual_feasible(const Eigen::VectorXd& d);
  void shift_basics(const Eigen::VectorXd& column_delta);
  void build();
  void refactor();
  bool iterate(bool phase_one, Status& status);
  std::ptrdiff_t choose_entering(const Eigen::VectorXd& y, bool use_bland,
                                 double& reduced) const;
  Eigen::VectorXd basic_costs() const;
  double reduced_cost(std::size_t j, const Eigen::VectorXd& y) const {
    return cost_[j] - y.dot(a_.col(static_cast<Eigen::Index>(j)));
  }
  bool check_final(Eigen::VectorXd& y, std::string& why);
  LPSolution finish(Status status);

  const LinearProgram& lp_;
  SolverOptions opt_;

  std::size_t m_ = 0;           // rows
  std::size_t n_ = 0;           // structural columns
  std::size_t num_slack_ = 0;
  std::size_t first_artificial_ = 0;
  std::size_t total_ = 0;

  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  std::vector<double> lower_, upper_, cost_;
  std::vector<VarState> state_;
  std::vector<double> x_;
  std::vector<std::size_t> basis_;  // column in each basis position
  Eigen::MatrixXd binv_;

  std::size_t iterations_ = 0;
  std::size_t since_refactor_ = 0;
  std::size_t refactor_interval_ = 64;
  std::size_t max_iterations_ = 0;
  std::string diagnostics_;
};

void Simplex::build() {
  m_ = lp_.num_constraints();
  n_ = lp_.num_variables();
  for (std::size_t i = 0; i < m_; ++i) {
    if (lp_.relation(i) != Relation::kEqual) ++num_slack_;
  }
  first_artificial_ = n_ + num_slack_;
  total_ = first_artificial_ + m_;

  a_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m_),
                             static_cast<Eigen::Index>(total_));
  b_.resize(static_cast<Eigen::Index>(m_));
  lower_.assign(total_, 0.0);
  upper_.assign(total_, kInfinity);
  cost_.assign(total_, 0.0);
  state_.assign(total_, VarState::kAtLower);
  x_.assign(total_, 0.0);

  std::size_t slack = n_;
  for (std::size_t i = 0; i < m_; ++i) {
    const auto& row = lp_.row(i);
    const auto ii = static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j < n_; ++j) {
      a_(ii, static_cast<Eigen::Index>(j)) = row[j];
    }
    b_(ii) = lp_.rhs(i);
    if (lp_.relation(i) == Relation::kLessEqual) {
      a_(ii, static_cast<Eigen::Index>(slack++)) = 1.0;
    } else if (lp_.relation(i) == Relation::kGreaterEqual) {
      a_(ii, static_cast<Eigen::Index>(slack++)) = -1.0;
    }
  }

  for (std::size_t j = 0; j < n_; ++j) {
    lower_[j] = lp_.lower(j);
    upper_[j] = lp_.upper(j);
    const double c = lp_.sense() == Sense::kMinimize ? lp_.objective()[j]
                                                      : -lp_.objective()[j];
    if (std::isfinite(upper_[j]) && (c < 0.0 || !std::isfinite(lower_[j]))) {
      // Boxed columns start at the bound their cost favours.
      state_[j] = VarState::kAtUpper;
      x_[j] = upper_[j];
    } else if (std::isfinite(lower_[j])) {
      state_[j] = VarState::kAtLower;
      x_[j] = lower_[j];
    } else {
      state_[j] = VarState::kFreeZero;
      x_[j] = 0.0;
    }
  }

  // Artificial i absorbs the residual of row i with a sign that makes its
  // starting value non-negative; the starting basis is diag(sign).
  Eigen::VectorXd residual = b_;
  for (std::size_t j = 0; j < first_artificial_; ++j) {
    if (x_[j] != 0.0) residual -= a_.col(static_cast<Eigen::Index>(j)) * x_[j];
  }
  basis_.resize(m_);
  binv_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m_),
                                static_cast<Eigen::Index>(m_));
  for (std::size_t i = 0; i < m_; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const std::size_t col = first_artificial_ + i;
    const double s = residual(ii) >= 0.0 ? 1.0 : -1.0;
    a_(ii, static_cast<Eigen::Index>(col)) = s;
    binv_(ii, ii) = s;
    basis_[i] = col;
    state_[col] = VarState::kBasic;
    x_[col] = std::abs(residual(ii));
  }

  refactor_interval_ = opt_.refactor_interval != 0
                           ? opt_.refactor_interval
                           : std::max<std::size_t>(64, m_ / 4);
  max_iterations_ = opt_.max_iterations != 0
                        ? opt_.max_iterations
                        : 100000 + 50 * (m_ + total_);
}

void Simplex::refactor() {
  since_refactor_ = 0;
  if (m_ == 0) return;
  const auto m = static_cast<Eigen::Index>(m_);
  Eigen::MatrixXd basis_matrix(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    basis_matrix.col(i) = a_.col(static_cast<Eigen::Index>(basis_[i]));
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
  binv_ = lu.inverse();

  Eigen::VectorXd rhs = b_;
  for (std::size_t j = 0; j < total_; ++j) {
    if (state_[j] != VarState::kBasic && x_[j] != 0.0) {
      rhs -= a_.col(static_cast<Eigen::Index>(j)) * x_[j];
    }
  }
  const Eigen::VectorXd xb = binv_ * rhs;
  for (std::size_t i = 0; i < m_; ++i) {
    x_[basis_[i]] = xb(static_cast<Eigen::Index>(i));
  }
  since_refactor_ = 0;
}

Eigen::VectorXd Simplex::basic_costs() const {
  Eigen::VectorXd cb(static_cast<Eigen::Index>(m_));
  for (std::size_t i = 0; i < m_; ++i) {
    cb(static_cast<Eigen::Index>(i)) = cost_[basis_[i]];
  }
  return cb;
}

std::ptrdiff_t Simplex::choose_entering(const Eigen::VectorXd& y,
                                        bool use_bland, double& reduced) const {
  const double tol = opt_.optimality_tolerance;
  std::ptrdiff_t best = -1;
  double best_score = 0.0;
  for (std::size_t j = 0; j < total_; ++j) {
    const VarState s = state_[j];
    if (s == VarState::kBasic || lower_[j] == upper_[j]) continue;
    const double d = reduced_cost(j, y);
    bool eligible = false;
    switch (s) {
      case VarState::kAtLower: eligible = d < -tol; break;
      case VarState::kAtUpper: eligible = d > tol; break;
      case VarState::kFreeZero: eligible = std::abs(d) > tol; break;
      case VarState::kBasic: break;
    }
    if (!eligible) continue;
    if (use_bland) {
      reduced = d;
      return static_cast<std::ptrdiff_t>(j);
    }
    if (std::abs(d) > best_score) {
      best_score = std::abs(d);
      best = static_cast<std::ptrdiff_t>(j);
      reduced = d;
    }
  }
  return best;
}

bool Simplex::iterate(bool phase_one, Status& status) {
  std::size_t degenerate_run = 0;
  constexpr std::size_t kDegenerateSwitch = 32;
  while (true) {
    if (iterations_ >= max_iterations_) {
      status = Status::kNumericalFailure;
      diagnostics_ = "iteration limit reached (" +
                     std::to_string(max_iterations_) + ")";
      return false;
    }
    if (since_refactor_ >= refactor_interval_) refactor();

    const Eigen::VectorXd y = binv_.transpose() * basic_costs();
    const bool use_bland = opt_.rule == PivotRule::kBland ||
                           degenerate_run >= kDegenerateSwitch;
    double d = 0.0;
    const std::ptrdiff_t entering = choose_entering(y, use_bland, d);
    if (entering < 0) {
      status = Status::kOptimal;
      return true;
    }
    const auto q = static_cast<std::size_t>(entering);
    const double dir = d < 0.0 ? 1.0 : -1.0;
    const Eigen::VectorXd alpha =
        binv_ * a_.col(static_cast<Eigen::Index>(q));

    // Ratio test. Basic variable i moves at rate -dir * alpha_i.
    double step = upper_[q] - lower_[q];  // bound flip of the entering column
    std::ptrdiff_t leave = -1;
    for (std::size_t i = 0; i < m_; ++i) {
      const double ai = alpha(static_cast<Eigen::Index>(i));
      if (std::abs(ai) <= opt_.pivot_tolerance) continue;
      const std::size_t var = basis_[i];
      const double rate = -dir * ai;
      double t;
      if (rate < 0.0 && std::isfinite(lower_[var])) {
        t = (x_[var] - lower_[var]) / -rate;
      } else if (rate > 0.0 && std::isfinite(upper_[var])) {
        t = (upper_[var] - x_[var]) / rate;
      } else {
        continue;
      }
      t = std::max(t, 0.0);
      const double tie = 1e-12 * std::max(1.0, std::abs(step));
      if (leave < 0) {
        if (t < step) {
          step = t;
          leave = static_cast<std::ptrdiff_t>(i);
        }
      } else if (t < step - tie) {
        step = t;
        leave = static_cast<std::ptrdiff_t>(i);
      } else if (t <= step + tie &&
                 var < basis_[static_cast<std::size_t>(leave)]) {
        leave = static_cast<std::ptrdiff_t>(i);
      }
    }

    if (!std::isfinite(step)) {
      if (phase_one) {
        status = Status::kNumericalFailure;
        diagnostics_ = "unbounded ray in phase one";
        return false;
      }
      status = Status::kUnbounded;
      return false;
    }

    ++iterations_;
    ++since_refactor_;
    degenerate_run = step <= opt_.feasibility_tolerance ? degenerate_run + 1 : 0;

    x_[q] += dir * step;
    for (std::size_t i = 0; i < m_; ++i) {
      x_[basis_[i]] -= dir * step * alpha(static_cast<Eigen::Index>(i));
    }

    if (leave < 0) {
      // Bound flip: the basis is unchanged.
      if (dir > 0.0) {
        state_[q] = VarState::kAtUpper;
        x_[q] = upper_[q];
      } else {
        state_[q] = VarState::kAtLower;
        x_[q] = lower_[q];
      }
      continue;
    }

    const auto r = static_cast<std::size_t>(leave);
    const std::size_t out = basis_[r];
    const double rate = -dir * alpha(static_cast<Eigen::Index>(r));
    if (rate < 0.0) {
      state_[out] = VarState::kAtLower;
      x_[out] = lower_[out];
    } else {
      state_[out] = VarState::kAtUpper;
      x_[out] = upper_[out];
    }
    basis_[r] = q;
    state_[q] = VarState::kBasic;

    const auto rr = static_cast<Eigen::Index>(r);
    const Eigen::RowVectorXd pivot_row = binv_.row(rr) / alpha(rr);
    binv_.noalias() -= alpha * pivot_row;
    binv_.row(rr) = pivot_row;
  }
}

bool Simplex::check_final(Eigen::VectorXd& y, std::string& why) {
  refactor();
  y = binv_.transpose() * basic_costs();
  const double ftol = opt_.feasibility_tolerance;
  for (std::size_t i = 0; i < m_; ++i) {
    const std::size_t var = basis_[i];
    const double scale = 1.0 + std::abs(x_[var]);
    if (x_[var] < lower_[var] - ftol * scale ||
        x_[var] > upper_[var] + ftol * scale) {
      why = "basic variable out of bounds after refactorization";
      return false;
    }
  }
  double d;
  if (choose_entering(y, true, d) >= 0) {
    why = "dual infeasible after refactorization";
    return false;
  }
  return true;
}

LPSolution Simplex::run() {
  Status status = Status::kOptimal;

  // Phase one: minimize the sum of artificials.
  std::fill(cost_.begin(), cost_.end(), 0.0);
  for (std::size_t j = first_artificial_; j < total_; ++j) cost_[j] = 1.0;
  if (!iterate(true, status)) return finish(status);
  refactor();
  double infeasibility = 0.0;
  for (std::size_t j = first_artificial_; j < total_; ++j) {
    infeasibility += std::abs(x_[j]);
  }
  const double b_scale = 1.0 + (m_ > 0 ? b_.cwiseAbs().maxCoeff() : 0.0);
  if (infeasibility > opt_.feasibility_tolerance * b_scale) {
    std::ostringstream os;
    os << "phase one ended with artificial mass " << infeasibility;
    diagnostics_ = os.str();
    return finish(Status::kInfeasible);
  }

  // Phase two: artificials are fixed at zero and leave the basis on the
  // first pivot that touches their row.
  for (std::size_t j = first_artificial_; j < total_; ++j) {
    upper_[j] = 0.0;
    cost_[j] = 0.0;
    if (state_[j] != VarState::kBasic) {
      state_[j] = VarState::kAtLower;
      x_[j] = 0.0;
    }
  }
  const double sense = lp_.sense() == Sense::kMinimize ? 1.0 : -1.0;
  for (std::size_t j = 0; j < n_; ++j) cost_[j] = sense * lp_.objective()[j];

  for (int attempt = 0; attempt < 3; ++attempt) {
    if (!iterate(false, status)) return finish(status);
    Eigen::VectorXd y;
    std::string why;
    if (check_final(y, why)) return finish(Status::kOptimal);
    diagnostics_ = why;
  }
  return finish(Status::kNumericalFailure);
}

// Dual simplex with a bound-flipping ratio test. Requires equality rows and
// boxed columns: every basis is then dual feasible once each nonbasic column
// sits at the bound its reduced cost favours, and the artificials of the
// starting basis are fixed at zero and pivoted out as primal infeasibilities.
LPSolution Simplex::run_dual() {
  const double sense = lp_.sense() == Sense::kMinimize ? 1.0 : -1.0;
  for (std::size_t j = 0; j < n_; ++j) cost_[j] = sense * lp_.objective()[j];
  for (std::size_t j = first_artificial_; j < total_; ++j) {
    upper_[j] = 0.0;
    cost_[j] = 0.0;
  }
  // Dual degeneracy stalls the method on problems such as L1 regression,
  // where every |c_j| is equal. Costs are pushed away from the bound each
  // column sits at by a deterministic pseudo-random amount; the true costs
  // are restored afterwards and primal pivots remove any dual infeasibility.
  const std::vector<double> true_cost = cost_;
  for (std::size_t j = 0; j < first_artificial_; ++j) {
    if (lower_[j] == upper_[j]) continue;
    const double u = static_cast<double>(splitmix64_finalize(j + 1) >> 11) * 0x1.0p-53;
    const double xi = kCostPerturbation * (1.0 + std::abs(cost_[j])) * (1.0 + u);
    cost_[j] += state_[j] == VarState::kAtUpper ? -xi : xi;
  }
  Status status = Status::kOptimal;
  for (int attempt = 0; attempt < 3; ++attempt) {
    if (!dual_iterate(status)) return finish(status);
    if (cost_ != true_cost) {
      cost_ = true_cost;
      if (!iterate(false, status)) return finish(status);
    }
    Eigen::VectorXd y;
    std::string why;
    if (check_final(y, why)) return finish(Status::kOptimal);
    diagnostics_ = why;
  }
  return finish(Status::kNumericalFailure);
}

void Simplex::shift_basics(const Eigen::VectorXd& column_delta) {
  const Eigen::VectorXd change = binv_ * column_delta;
  for (std::size_t i = 0; i < m_; ++i) {
    x_[basis_[i]] -= change(static_cast<Eigen::Index>(i));
  }
}

void Simplex::flip_to_dual_feasible(const Eigen::VectorXd& d) {
  const double otol = opt_.optimality_tolerance;
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m_));
  bool any = false;
  for (std::size_t j = 0; j < total_; ++j) {
    if (state_[j] == VarState::kBasic || lower_[j] == upper_[j]) continue;
    const double dj = d(static_cast<Eigen::Index>(j));
    double target = x_[j];
    if (state_[j] == VarState::kAtLower && dj < -otol) {
      state_[j] = VarState::kAtUpper;
      target = upper_[j];
    } else if (state_[j] == VarState::kAtUpper && dj > otol) {
      state_[j] = VarState::kAtLower;
      target = lower_[j];
    }
    if (target != x_[j]) {
      delta += a_.col(static_cast<Eigen::Index>(j)) * (target - x_[j]);
      x_[j] = target;
      any = true;
    }
  }
  if (any) shift_basics(delta);
}

bool Simplex::dual_iterate(Status& status) {
  const double ftol = opt_.feasibility_tolerance;
  const double ptol = opt_.pivot_tolerance;
  const auto m = static_cast<Eigen::Index>(m_);
  Eigen::VectorXd cost = Eigen::Map<const Eigen::VectorXd>(
      cost_.data(), static_cast<Eigen::Index>(total_));
  Eigen::VectorXd d;
  auto price = [&] {
    d = cost - a_.transpose() * (binv_.transpose() * basic_costs());
    for (std::size_t i = 0; i < m_; ++i) d(static_cast<Eigen::Index>(basis_[i])) = 0.0;
  };
  refactor();
  price();

  struct Breakpoint {
    double ratio;
    double magnitude;
    std::size_t column;
  };
  std::vector<Breakpoint> candidates;

  while (true) {
    if (iterations_ >= max_iterations_) {
      status = Status::kNumericalFailure;
      diagnostics_ = "iteration limit reached (" + std::to_string(max_iterations_) + ")";
      return false;
    }
    if (since_refactor_ >= refactor_interval_) {
      refactor();
      price();
    }
    flip_to_dual_feasible(d);

    // Leaving row: dual steepest edge, violation^2 / ||e_i^T B^-1||^2;
    // lowest position on ties.
    const Eigen::VectorXd row_norms = binv_.rowwise().squaredNorm();
    std::ptrdiff_t leave = -1;
    double worst = 0.0;
    double best_score = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t var = basis_[i];
      const double v = x_[var];
      double viol = 0.0;
      if (v < lower_[var]) viol = lower_[var] - v;
      if (v > upper_[var]) viol = v - upper_[var];
      if (!(viol > ftol * (1.0 + std::abs(v)))) continue;
      const double score = viol * viol / row_norms(static_cast<Eigen::Index>(i));
      if (score > best_score) {
        best_score = score;
        worst = viol;
        leave = static_cast<std::ptrdiff_t>(i);
      }
    }
    if (leave < 0) {
      status = Status::kOptimal;
      return true;
    }
    const auto r = static_cast<std::size_t>(leave);
    const auto rr = static_cast<Eigen::Index>(r);
    const std::size_t out = basis_[r];
    const bool to_upper = x_[out] > upper_[out];
    const double sigma = to_upper ? 1.0 : -1.0;

    // Nonbasic artificials are fixed at zero and never enter.
    const auto live = static_cast<Eigen::Index>(first_artificial_);
    const Eigen::RowVectorXd alpha_row = binv_.row(rr) * a_.leftCols(live);

    candidates.clear();
    for (std::size_t j = 0; j < first_artificial_; ++j) {
      if (state_[j] == VarState::kBasic || lower_[j] == upper_[j]) continue;
      const double aj = sigma * alpha_row(static_cast<Eigen::Index>(j));
      const double dj = d(static_cast<Eigen::Index>(j));
      if (state_[j] == VarState::kAtLower && aj > ptol) {
        candidates.push_back({std::max(dj, 0.0) / aj, std::abs(aj), j});
      } else if (state_[j] == VarState::kAtUpper && aj < -ptol) {
        candidates.push_back({std::min(dj, 0.0) / aj, std::abs(aj), j});
      } else if (state_[j] == VarState::kFreeZero && std::abs(aj) > ptol) {
        candidates.push_back({0.0, std::abs(aj), j});
      }
    }
    // Pass breakpoints in ratio order (larger |alpha| first on ties) while the
    // dual objective keeps increasing; a heap avoids sorting the whole set.
    auto later = [](const Breakpoint& a, const Breakpoint& b) {
      if (a.ratio != b.ratio) return a.ratio > b.ratio;
      if (a.magnitude != b.magnitude) return a.magnitude < b.magnitude;
      return a.column > b.column;
    };
    std::make_heap(candidates.begin(), candidates.end(), later);
    double slope = worst;
    std::size_t passed = 0;
    bool found = false;
    while (passed < candidates.size()) {
      std::pop_heap(candidates.begin(), candidates.end() - static_cast<std::ptrdiff_t>(passed),
                    later);
      const Breakpoint& b = candidates[candidates.size() - 1 - passed];
      ++passed;
      slope -= (upper_[b.column] - lower_[b.column]) * b.magnitude;
      if (!(slope > 0.0)) {
        found = true;
        break;
      }
    }
    if (!found) {
      status = Status::kInfeasible;
      diagnostics_ = "dual ray: a basic variable cannot reach its bounds";
      return false;
    }
    // Popped entries sit at the back in pass order; the last one enters.
    std::reverse(candidates.end() - static_cast<std::ptrdiff_t>(passed), candidates.end());
    candidates.erase(candidates.begin(), candidates.end() - static_cast<std::ptrdiff_t>(passed));
    const std::size_t pick = passed - 1;

    ++iterations_;
    ++since_refactor_;

    const std::size_t q = candidates[pick].column;
    const double step = candidates[pick].ratio;
    if (pick > 0) {
      Eigen::VectorXd delta = Eigen::VectorXd::Zero(m);
      for (std::size_t c = 0; c < pick; ++c) {
        const std::size_t j = candidates[c].column;
        const double target = state_[j] == VarState::kAtLower ? upper_[j] : lower_[j];
        state_[j] = state_[j] == VarState::kAtLower ? VarState::kAtUpper : VarState::kAtLower;
        delta += a_.col(static_cast<Eigen::Index>(j)) * (target - x_[j]);
        x_[j] = target;
      }
      shift_basics(delta);
    }

    // Reduced costs move along the dual ray by `step`.
    for (std::size_t j = 0; j < first_artificial_; ++j) {
      if (state_[j] == VarState::kBasic) continue;
      d(static_cast<Eigen::Index>(j)) -= step * sigma * alpha_row(static_cast<Eigen::Index>(j));
    }
    d(static_cast<Eigen::Index>(q)) = 0.0;
    d(static_cast<Eigen::Index>(out)) = -sigma * step;

    const Eigen::VectorXd alpha = binv_ * a_.col(static_cast<Eigen::Index>(q));
    const double bound = to_upper ? upper_[out] : lower_[out];
    const double theta = (x_[out] - bound) / alpha(rr);
    x_[q] += theta;
    for (std::size_t i = 0; i < m_; ++i) {
      x_[basis_[i]] -= theta * alpha(static_cast<Eigen::Index>(i));
    }
    state_[out] = to_upper && lower_[out] != upper_[out] ? VarState::kAtUpper
                                                         : VarState::kAtLower;
    x_[out] = bound;
    basis_[r] = q;
    state_[q] = VarState::kBasic;

    const Eigen::RowVectorXd pivot_row = binv_.row(rr) / alpha(rr);
    binv_.noalias() -= alpha * pivot_row;
    binv_.row(rr) = pivot_row;
  }
}

LPSolution Simplex::finish(Status status) {
  LPSolution sol;
  sol.status = status;
  sol.iterations = iterations_;
  sol.diagnostics = diagnostics_;
  if (status != Status::kOptimal) return sol;

  const double sense = lp_.sense() == Sense::kMinimize ? 1.0 : -1.0;
  const Eigen::VectorXd y = binv_.transpose() * basic_costs();

  sol.x.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
  for (std::size_t j = 0; j < n_; ++j) {
    if (state_[j] == VarState::kAtLower) sol.x[j] = lower_[j];
    if (state_[j] == VarState::kAtUpper) sol.x[j] = upper_[j];
  }

  sol.duals.resize(m_);
  for (std::size_t i = 0; i < m_; ++i) {
    sol.duals[i] = sense * y(static_cast<Eigen::Index>(i));
  }

  // Objective, bound-aware dual objective, and reduced costs, all in the
  // internal minimization sense first.
  double primal = 0.0;
  double dual = b_.dot(y);
  sol.reduced_costs.resize(n_);
  const double otol = opt_.optimality_tolerance;
  auto bound_term = [&](std::size_t j, double d) {
    if (std::abs(d) <= otol) {
      // Treat as zero unless the variable actually sits at a finite bound.
      const double at = state_[j] == VarState::kAtLower   ? lower_[j]
                        : state_[j] == VarState::kAtUpper ? upper_[j]
                                                          : 0.0;
      return std::isfinite(at) ? d * at : 0.0;
    }
    const double bound = d > 0.0 ? lower_[j] : upper_[j];
    return d * bound;  // infinite when the dual is infeasible
  };
  for (std::size_t j = 0; j < first_artificial_; ++j) {
    const double d = state_[j] == VarState::kBasic ? 0.0 : reduced_cost(j, y);
    if (j < n_) {
      primal += cost_[j] * sol.x[j];
      sol.reduced_costs[j] = sense * d;
    }
    dual += bound_term(j, d);
  }
  sol.objective = sense * primal;
  sol.dual_objective = sense * dual;

  double residual = 0.0;
  for (std::size_t i = 0; i < m_; ++i) {
    const auto& row = lp_.row(i);
    double activity = 0.0;
    double magnitude = std::abs(lp_.rhs(i));
    for (std::size_t j = 0; j < n_; ++j) {
      activity += row[j] * sol.x[j];
      magnitude += std::abs(row[j] * sol.x[j]);
    }
    double violation = 0.0;
    switch (lp_.relation(i)) {
      case Relation::kLessEqual: violation = std::max(0.0, activity - lp_.rhs(i)); break;
      case Relation::kGreaterEqual: violation = std::max(0.0, lp_.rhs(i) - activity); break;
      case Relation::kEqual: violation = std::abs(activity - lp_.rhs(i)); break;
    }
    residual = std::max(residual, violation / (1.0 + magnitude));
  }
  for (std::size_t j = 0; j < n_; ++j) {
    const double v = std::max(lower_[j] - sol.x[j], sol.x[j] - upper_[j]);
    residual = std::max(residual, std::max(0.0, v) / (1.0 + std::abs(sol.x[j])));
  }
  sol.primal_residual = residual;

  const double gap = std::abs(sol.objective - sol.dual_objective);
  if (!(residual <= opt_.feasibility_tolerance)) {
    sol.status = Status::kNumericalFailure;
    std::ostringstream os;
    os << "primal residual " << residual << " exceeds tolerance";
    sol.diagnostics = os.str();
  } else if (!(gap <= opt_.gap_tolerance * (1.0 + std::abs(sol.objective)))) {
    sol.status = Status::kNumericalFailure;
    std::ostringstream os;
    os << "duality gap " << gap << " exceeds tolerance";
    sol.diagnostics = os.str();
  }
  return sol;
}

}  // namespace

namespace {

bool dual_applicable(const LinearProgram& program) {
  for (std::size_t i = 0; i < program.num_constraints(); ++i) {
    if (program.relation(i) != Relation::kEqual) return false;
  }
  for (std::size_t j = 0; j < program.num_variables(); ++j) {
    if (!std::isfinite(program.lower(j)) || !std::isfinite(program.upper(j))) {
      return false;
    }
  }
  return true;
}

}  // namespace

LPSolution solve(const LinearProgram& program, const SolverOptions& options) {
  const bool dual_ok = dual_applicable(program);
  if (options.algorithm == Algorithm::kDual && !dual_ok) {
    throw std::invalid_argument(
        "lp::solve: the dual method needs equality rows and boxed variables");
  }
  if (options.algorithm != Algorithm::kPrimal && dual_ok) {
    LPSolution sol = Simplex(program, options).run_dual();
    if (sol.status != Status::kNumericalFailure || options.algorithm == Algorithm::kDual) {
      return sol;
    }
  }
  return Simplex(program, options).run();
}

}  // namespace momatch::lp
