#include "ot/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ot/errors.hpp"

namespace ot::lp {

namespace {

constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kPhase1FeasTol = 1e-8;
constexpr int kRefactorInterval = 64;
constexpr int kMaxDimension = 5000;

// Working state for the bounded-variable simplex. Columns 0..n-1 are the
// original variables, n..n+m-1 the phase-1 artificials. The basis inverse is
// kept explicitly and refreshed from scratch periodically.
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const std::vector<double>& cost)
      : n_(static_cast<int>(lp.objective.size())),
        m_(static_cast<int>(lp.eq_rhs.size())),
        a_(lp.eq_matrix),
        b_(lp.eq_rhs),
        cost_(cost) {
    nt_ = n_ + m_;
    lower_ = lp.var_lower;
    upper_ = lp.var_upper;
    lower_.resize(nt_, 0.0);
    upper_.resize(nt_, kInf);
    cost_.resize(nt_, 0.0);

    x_.assign(nt_, 0.0);
    at_upper_.assign(nt_, false);
    in_basis_.assign(nt_, false);
    basis_.assign(m_, -1);

    // Nonbasic start: finite lower bound if present, else finite upper,
    // else 0 for a free variable.
    for (int j = 0; j < n_; ++j) {
      if (std::isfinite(lower_[j])) {
        x_[j] = lower_[j];
      } else if (std::isfinite(upper_[j])) {
        x_[j] = upper_[j];
        at_upper_[j] = true;
      } else {
        x_[j] = 0.0;
      }
    }

    // Artificial j = n + i carries the residual of row i with a +-1 column,
    // giving an identity-up-to-sign starting basis.
    art_sign_.assign(m_, 1.0);
    binv_.assign(static_cast<size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      double r = b_[i];
      for (int j = 0; j < n_; ++j) r -= a_.at(i, j) * x_[j];
      art_sign_[i] = (r >= 0.0) ? 1.0 : -1.0;
      int aj = n_ + i;
      basis_[i] = aj;
      in_basis_[aj] = true;
      x_[aj] = std::abs(r);
      binv_[static_cast<size_t>(i) * m_ + i] = art_sign_[i];
    }
  }

  // Column col of the full constraint matrix (originals then artificials).
  double entry(int row, int col) const {
    if (col < n_) return a_.at(row, col);
    return (col - n_ == row) ? art_sign_[row] : 0.0;
  }

  void set_costs(const std::vector<double>& c) {
    for (int j = 0; j < nt_; ++j) cost_[j] = (j < static_cast<int>(c.size())) ? c[j] : 0.0;
  }

  // Pins the artificial variables at zero between phases.
  void fix_artificials() {
    for (int i = 0; i < m_; ++i) {
      int aj = n_ + i;
      upper_[aj] = 0.0;
      if (!in_basis_[aj]) x_[aj] = 0.0;
    }
  }

  double objective() const {
    double v = 0.0;
    for (int j = 0; j < nt_; ++j) v += cost_[j] * x_[j];
    return v;
  }

  const std::vector<double>& values() const { return x_; }
  double value(int j) const { return x_[j]; }

  // Runs simplex iterations until optimality or unboundedness.
  Status iterate() {
    // Generous cap; Bland's rule terminates long before this on sane input.
    const long max_iters = 10000L + 500L * (static_cast<long>(nt_) + m_);
    std::vector<double> y(m_), w(m_);
    for (long iter = 0; iter < max_iters; ++iter) {
      if (iters_since_refactor_ >= kRefactorInterval) refactorize();

      // y = c_B B^{-1}
      for (int i = 0; i < m_; ++i) y[i] = 0.0;
      for (int r = 0; r < m_; ++r) {
        double cb = cost_[basis_[r]];
        if (cb == 0.0) continue;
        const double* row = &binv_[static_cast<size_t>(r) * m_];
        for (int i = 0; i < m_; ++i) y[i] += cb * row[i];
      }

      // Bland: the entering variable is the lowest-index improving one.
      int enter = -1;
      int dir = 0;
      for (int j = 0; j < nt_; ++j) {
        if (in_basis_[j]) continue;
        if (upper_[j] - lower_[j] <= 0.0) continue;  // fixed
        double d = cost_[j];
        for (int i = 0; i < m_; ++i) d -= y[i] * entry(i, j);
        bool is_free = !std::isfinite(lower_[j]) && !std::isfinite(upper_[j]);
        if (is_free) {
          if (d < -kReducedCostTol) {
            enter = j;
            dir = +1;
            break;
          }
          if (d > kReducedCostTol) {
            enter = j;
            dir = -1;
            break;
          }
        } else if (!at_upper_[j]) {
          if (d < -kReducedCostTol) {
            enter = j;
            dir = +1;
            break;
          }
        } else {
          if (d > kReducedCostTol) {
            enter = j;
            dir = -1;
            break;
          }
        }
      }
      if (enter < 0) return Status::Optimal;

      // w = B^{-1} A_enter
      for (int i = 0; i < m_; ++i) w[i] = 0.0;
      if (enter < n_) {
        for (int r = 0; r < m_; ++r) {
          const double* row = &binv_[static_cast<size_t>(r) * m_];
          double s = 0.0;
          for (int i = 0; i < m_; ++i) s += row[i] * a_.at(i, enter);
          w[r] = s;
        }
      } else {
        int i = enter - n_;
        for (int r = 0; r < m_; ++r) w[r] = binv_[static_cast<size_t>(r) * m_ + i] * art_sign_[i];
      }

      // Ratio test: the entering variable moves by t >= 0 in direction dir,
      // basics move by -t * dir * w.
      double t_limit = kInf;
      int leave_row = -1;
      bool leave_at_upper = false;
      for (int r = 0; r < m_; ++r) {
        double coef = dir * w[r];
        int bj = basis_[r];
        if (coef > kPivotTol) {
          if (std::isfinite(lower_[bj])) {
            double t = (x_[bj] - lower_[bj]) / coef;
            if (t < t_limit - kPivotTol ||
                (t < t_limit + kPivotTol && (leave_row < 0 || bj < basis_[leave_row]))) {
              t_limit = std::min(t_limit, std::max(t, 0.0));
              leave_row = r;
              leave_at_upper = false;
            }
          }
        } else if (coef < -kPivotTol) {
          if (std::isfinite(upper_[bj])) {
            double t = (upper_[bj] - x_[bj]) / (-coef);
            if (t < t_limit - kPivotTol ||
                (t < t_limit + kPivotTol && (leave_row < 0 || bj < basis_[leave_row]))) {
              t_limit = std::min(t_limit, std::max(t, 0.0));
              leave_row = r;
              leave_at_upper = true;
            }
          }
        }
      }
      double bound_range = upper_[enter] - lower_[enter];
      bool bound_flip = false;
      if (std::isfinite(bound_range) && bound_range <= t_limit + kPivotTol &&
          (leave_row < 0 || bound_range <= t_limit)) {
        // The entering variable hits its opposite bound first.
        t_limit = bound_range;
        bound_flip = true;
      }
      if (!bound_flip && leave_row < 0) return Status::Unbounded;

      // Apply the step.
      x_[enter] += dir * t_limit;
      for (int r = 0; r < m_; ++r) {
        x_[basis_[r]] -= dir * t_limit * w[r];
      }
      if (bound_flip) {
        at_upper_[enter] = (dir > 0);
        continue;
      }

      int leave = basis_[leave_row];
      // Snap the leaving variable exactly onto the bound it reached.
      x_[leave] = leave_at_upper ? upper_[leave] : lower_[leave];
      at_upper_[leave] = leave_at_upper;
      in_basis_[leave] = false;
      basis_[leave_row] = enter;
      in_basis_[enter] = true;
      at_upper_[enter] = false;
      update_binv(leave_row, w);
      ++iters_since_refactor_;
    }
    throw LpFailureError("simplex iteration limit exceeded (n=" + std::to_string(n_) +
                         ", m=" + std::to_string(m_) + ")");
  }

  // Degenerate pivots that swap a zero-level artificial out of the basis for
  // an original column; rows with no eligible column are redundant and keep
  // their artificial basic at level zero.
  void purge_artificials() {
    std::vector<double> w(m_);
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      int enter = -1;
      for (int j = 0; j < n_; ++j) {
        if (in_basis_[j]) continue;
        const double* row = &binv_[static_cast<size_t>(r) * m_];
        double s = 0.0;
        for (int i = 0; i < m_; ++i) s += row[i] * a_.at(i, j);
        if (std::abs(s) > 1e-7) {
          enter = j;
          break;
        }
      }
      if (enter < 0) continue;
      for (int rr = 0; rr < m_; ++rr) {
        const double* row = &binv_[static_cast<size_t>(rr) * m_];
        double s = 0.0;
        for (int i = 0; i < m_; ++i) s += row[i] * a_.at(i, enter);
        w[rr] = s;
      }
      int leave = basis_[r];
      x_[leave] = 0.0;
      at_upper_[leave] = false;
      in_basis_[leave] = false;
      basis_[r] = enter;
      in_basis_[enter] = true;
      at_upper_[enter] = false;
      // x does not change: the pivot is degenerate (artificial at level 0).
      update_binv(r, w);
      ++iters_since_refactor_;
    }
  }

  // Rebuilds B^{-1} by Gauss-Jordan and recomputes basic values from the
  // nonbasic ones; keeps drift from eta updates in check.
  void refactorize() {
    std::vector<double> mat(static_cast<size_t>(m_) * 2 * m_, 0.0);
    auto at = [&](int r, int c) -> double& { return mat[static_cast<size_t>(r) * 2 * m_ + c]; };
    for (int r = 0; r < m_; ++r) {
      for (int c = 0; c < m_; ++c) at(r, c) = entry(r, basis_[c]);
      at(r, m_ + r) = 1.0;
    }
    for (int col = 0; col < m_; ++col) {
      int piv = col;
      double best = std::abs(at(col, col));
      for (int r = col + 1; r < m_; ++r) {
        if (std::abs(at(r, col)) > best) {
          best = std::abs(at(r, col));
          piv = r;
        }
      }
      if (best < 1e-12) {
        throw LpFailureError("singular basis during refactorization");
      }
      if (piv != col) {
        for (int c = 0; c < 2 * m_; ++c) std::swap(at(piv, c), at(col, c));
      }
      double d = at(col, col);
      for (int c = 0; c < 2 * m_; ++c) at(col, c) /= d;
      for (int r = 0; r < m_; ++r) {
        if (r == col) continue;
        double f = at(r, col);
        if (f == 0.0) continue;
        for (int c = 0; c < 2 * m_; ++c) at(r, c) -= f * at(col, c);
      }
    }
    for (int r = 0; r < m_; ++r) {
      for (int c = 0; c < m_; ++c) binv_[static_cast<size_t>(r) * m_ + c] = at(r, m_ + c);
    }
    recompute_basics();
    iters_since_refactor_ = 0;
  }

  void recompute_basics() {
    std::vector<double> rhs(b_);
    for (int j = 0; j < nt_; ++j) {
      if (in_basis_[j] || x_[j] == 0.0) continue;
      for (int i = 0; i < m_; ++i) rhs[i] -= entry(i, j) * x_[j];
    }
    for (int r = 0; r < m_; ++r) {
      const double* row = &binv_[static_cast<size_t>(r) * m_];
      double s = 0.0;
      for (int i = 0; i < m_; ++i) s += row[i] * rhs[i];
      x_[basis_[r]] = s;
    }
  }

 private:
  void update_binv(int pivot_row, const std::vector<double>& w) {
    double piv = w[pivot_row];
    double* prow = &binv_[static_cast<size_t>(pivot_row) * m_];
    for (int i = 0; i < m_; ++i) prow[i] /= piv;
    for (int r = 0; r < m_; ++r) {
      if (r == pivot_row) continue;
      double f = w[r];
      if (f == 0.0) continue;
      double* row = &binv_[static_cast<size_t>(r) * m_];
      for (int i = 0; i < m_; ++i) row[i] -= f * prow[i];
    }
  }

  int n_;
  int m_;
  int nt_;
  Matrix a_;
  std::vector<double> b_;
  std::vector<double> cost_;
  std::vector<double> lower_, upper_;
  std::vector<double> x_;
  std::vector<bool> at_upper_, in_basis_;
  std::vector<int> basis_;
  std::vector<double> art_sign_;
  std::vector<double> binv_;
  int iters_since_refactor_ = 0;
};

void validate(const LinearProgram& lp) {
  int n = static_cast<int>(lp.objective.size());
  int m = static_cast<int>(lp.eq_rhs.size());
  if (n < 1) throw DimensionMismatchError("linear program has no variables");
  if (n > kMaxDimension || m > kMaxDimension) {
    throw DimensionMismatchError("linear program exceeds the supported size of 5000");
  }
  if (lp.eq_matrix.rows() != m || (m > 0 && lp.eq_matrix.cols() != n)) {
    throw DimensionMismatchError("constraint matrix is " + std::to_string(lp.eq_matrix.rows()) +
                                 "x" + std::to_string(lp.eq_matrix.cols()) + ", expected " +
                                 std::to_string(m) + "x" + std::to_string(n));
  }
  if (static_cast<int>(lp.var_lower.size()) != n || static_cast<int>(lp.var_upper.size()) != n) {
    throw DimensionMismatchError("variable bound vectors do not match the variable count");
  }
  for (int j = 0; j < n; ++j) {
    if (std::isnan(lp.var_lower[j]) || std::isnan(lp.var_upper[j]) ||
        lp.var_lower[j] > lp.var_upper[j]) {
      throw DimensionMismatchError("variable " + std::to_string(j + 1) + " has crossed bounds");
    }
  }
}

}  // namespace

LpSolution solve(const LinearProgram& lp) {
  validate(lp);
  int n = static_cast<int>(lp.objective.size());
  int m = static_cast<int>(lp.eq_rhs.size());

  std::vector<double> objective = lp.objective;
  if (lp.sense == Sense::Maximize) {
    for (double& c : objective) c = -c;
  }

  // Phase 1: minimize the total artificial mass.
  std::vector<double> phase1_cost(static_cast<size_t>(n) + m, 0.0);
  for (int i = 0; i < m; ++i) phase1_cost[n + i] = 1.0;
  Simplex splx(lp, phase1_cost);
  Status s1 = splx.iterate();
  if (s1 == Status::Unbounded) {
    throw LpFailureError("phase 1 reported unbounded");
  }
  splx.refactorize();
  if (splx.objective() > kPhase1FeasTol) {
    return {Status::Infeasible, {}, 0.0};
  }
  splx.purge_artificials();
  splx.fix_artificials();

  // Phase 2 on the original objective.
  splx.set_costs(objective);
  Status s2 = splx.iterate();
  if (s2 == Status::Unbounded) {
    return {Status::Unbounded, {}, 0.0};
  }
  splx.refactorize();

  LpSolution sol;
  sol.status = Status::Optimal;
  sol.x.assign(splx.values().begin(), splx.values().begin() + n);
  // Snap basic values that drifted marginally outside their box.
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(lp.var_lower[j]) && sol.x[j] < lp.var_lower[j]) {
      if (lp.var_lower[j] - sol.x[j] > 1e-7) {
        throw LpFailureError("solution violates a lower bound beyond tolerance");
      }
      sol.x[j] = lp.var_lower[j];
    }
    if (std::isfinite(lp.var_upper[j]) && sol.x[j] > lp.var_upper[j]) {
      if (sol.x[j] - lp.var_upper[j] > 1e-7) {
        throw LpFailureError("solution violates an upper bound beyond tolerance");
      }
      sol.x[j] = lp.var_upper[j];
    }
  }
  double value = 0.0;
  for (int j = 0; j < n; ++j) value += lp.objective[j] * sol.x[j];
  sol.objective_value = value;
  return sol;
}

}  // namespace ot::lp
