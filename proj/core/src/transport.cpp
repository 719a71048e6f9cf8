#include "ot/transport.hpp"

#include <cmath>
#include <string>

#include "ot/lp.hpp"
#include "ot/parallel.hpp"

namespace ot {

namespace {

constexpr double kCostEqualitySlack = 1e-9;

void check_equal_k(const OrdinalDistribution& mu, const OrdinalDistribution& nu) {
  if (mu.categories() != nu.categories()) {
    throw DimensionMismatchError("distributions have different category counts (" +
                                 std::to_string(mu.categories()) + " vs " +
                                 std::to_string(nu.categories()) + ")");
  }
}

// Clamp a raw LP point into a valid coupling matrix.
Coupling coupling_from_lp(const std::vector<double>& x, int k) {
  Matrix mass(k, k);
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      double v = x[static_cast<size_t>(i) * k + j];
      if (v < -1e-7) {
        throw LpFailureError("coupling entry from the solver is negative beyond tolerance");
      }
      v = std::max(v, 0.0);
      mass.at(i, j) = v;
      total += v;
    }
  }
  if (std::abs(total - 1.0) > 1e-6) {
    throw LpFailureError("coupling mass from the solver deviates from 1 beyond tolerance");
  }
  for (double& v : mass.data()) v /= total;
  return Coupling::from_mass(std::move(mass));
}

// Equality-marginal transportation constraints over pi (row-major K^2 vars):
// K row-sum rows then K column-sum rows.
void add_transport_rows(Matrix& a, std::vector<double>& rhs, const OrdinalDistribution& mu,
                        const OrdinalDistribution& nu) {
  int k = mu.categories();
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) a.at(i, i * k + j) = 1.0;
    rhs[i] = mu.prob(i);
  }
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < k; ++i) a.at(k + j, i * k + j) = 1.0;
    rhs[k + j] = nu.prob(j);
  }
}

}  // namespace

double discrepancy(const OrdinalDistribution& mu, const OrdinalDistribution& nu) {
  check_equal_k(mu, nu);
  double total = 0.0;
  double fm = 0.0, fn = 0.0;
  for (int k = 0; k + 1 < mu.categories(); ++k) {
    fm += mu.prob(k);
    fn += nu.prob(k);
    total += std::abs(fm - fn);
  }
  return total;
}

Coupling min_cost_coupling(const OrdinalDistribution& mu, const OrdinalDistribution& nu) {
  check_equal_k(mu, nu);
  int k = mu.categories();
  Matrix mass(k, k);
  int i = 0, j = 0;
  double row_left = mu.prob(0), col_left = nu.prob(0);
  while (i < k && j < k) {
    double f = std::min(row_left, col_left);
    mass.at(i, j) += f;
    row_left -= f;
    col_left -= f;
    // Advance whichever side ran out; on an exact tie advance both.
    bool row_done = row_left <= 0.0;
    bool col_done = col_left <= 0.0;
    if (row_done) {
      ++i;
      if (i < k) row_left = mu.prob(i);
    }
    if (col_done) {
      ++j;
      if (j < k) col_left = nu.prob(j);
    }
    if (!row_done && !col_done) break;  // unreachable: min() drains one side
  }
  return Coupling::from_mass(std::move(mass), mu, nu);
}

double transport_cost(const Matrix& mass) {
  if (mass.rows() != mass.cols()) {
    throw DimensionMismatchError("mass matrix must be square");
  }
  double total = 0.0;
  for (int i = 0; i < mass.rows(); ++i) {
    for (int j = 0; j < mass.cols(); ++j) {
      total += category_distance(i, j) * mass.at(i, j);
    }
  }
  return total;
}

double transport_cost(const Coupling& c) { return transport_cost(c.mass()); }

namespace detail {

CellBoundsMatrix optimal_cell_bounds(const OrdinalDistribution& mu, const OrdinalDistribution& nu,
                                     int threads) {
  check_equal_k(mu, nu);
  int k = mu.categories();
  double d = discrepancy(mu, nu);

  // Variables: pi (K^2 in [0,1]) and the attained cost (pinned to the
  // discrepancy up to slack). Rows: marginals plus the cost balance.
  int n = k * k + 1;
  int m = 2 * k + 1;
  lp::LinearProgram base;
  base.objective.assign(n, 0.0);
  base.eq_matrix = Matrix(m, n);
  base.eq_rhs.assign(m, 0.0);
  add_transport_rows(base.eq_matrix, base.eq_rhs, mu, nu);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      base.eq_matrix.at(2 * k, i * k + j) = category_distance(i, j);
    }
  }
  base.eq_matrix.at(2 * k, k * k) = -1.0;
  base.var_lower.assign(n, 0.0);
  base.var_upper.assign(n, 1.0);
  base.var_lower[k * k] = std::max(0.0, d - kCostEqualitySlack);
  base.var_upper[k * k] = d + kCostEqualitySlack;

  std::vector<double> results(static_cast<size_t>(2) * k * k);
  parallel_for(2 * k * k, threads, [&](int task) {
    int cell = task / 2;
    bool maximize = (task % 2) == 1;
    lp::LinearProgram prog = base;
    prog.objective[cell] = 1.0;
    prog.sense = maximize ? lp::Sense::Maximize : lp::Sense::Minimize;
    lp::LpSolution sol = lp::solve(prog);
    if (sol.status != lp::Status::Optimal) {
      throw LpFailureError("cell-bound program unexpectedly not optimal");
    }
    results[task] = sol.objective_value;
  });

  CellBoundsMatrix bounds(k);
  for (int cell = 0; cell < k * k; ++cell) {
    double lo = std::min(1.0, std::max(0.0, results[2 * cell]));
    double hi = std::min(1.0, std::max(0.0, results[2 * cell + 1]));
    if (lo > hi) {
      if (lo - hi > 1e-7) throw LpFailureError("cell bound interval inverted beyond tolerance");
      lo = hi;
    }
    bounds.at(cell / k, cell % k) = Interval(lo, hi);
  }
  return bounds;
}

}  // namespace detail

CellBoundsMatrix optimal_cell_bounds(const OrdinalDistribution& mu,
                                     const OrdinalDistribution& nu) {
  return detail::optimal_cell_bounds(mu, nu, resolve_thread_count());
}

std::pair<double, Coupling> max_mobility(const OrdinalDistribution& mu,
                                         const OrdinalDistribution& nu) {
  check_equal_k(mu, nu);
  int k = mu.categories();
  lp::LinearProgram prog;
  prog.objective.assign(static_cast<size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) prog.objective[static_cast<size_t>(i) * k + j] = category_distance(i, j);
  }
  prog.eq_matrix = Matrix(2 * k, k * k);
  prog.eq_rhs.assign(2 * k, 0.0);
  add_transport_rows(prog.eq_matrix, prog.eq_rhs, mu, nu);
  prog.var_lower.assign(static_cast<size_t>(k) * k, 0.0);
  prog.var_upper.assign(static_cast<size_t>(k) * k, 1.0);
  prog.sense = lp::Sense::Maximize;

  lp::LpSolution sol = lp::solve(prog);
  if (sol.status != lp::Status::Optimal) {
    throw LpFailureError("maximal-mobility program unexpectedly not optimal");
  }
  return {sol.objective_value, coupling_from_lp(sol.x, k)};
}

CellBoundsMatrix frechet_cell_bounds(const OrdinalDistribution& mu,
                                     const OrdinalDistribution& nu) {
  check_equal_k(mu, nu);
  int k = mu.categories();
  CellBoundsMatrix bounds(k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      double lo = std::max(0.0, mu.prob(i) + nu.prob(j) - 1.0);
      double hi = std::min(mu.prob(i), nu.prob(j));
      bounds.at(i, j) = Interval(lo, std::max(lo, hi));
    }
  }
  return bounds;
}

double normalized_discrepancy(double value, int k) {
  if (k < 2) {
    throw OutOfRangeError("normalization requires at least 2 categories");
  }
  double max_value = k - 1.0;
  if (value < -kMassTolerance || value > max_value + kMassTolerance) {
    throw OutOfRangeError("discrepancy " + std::to_string(value) + " outside [0, " +
                          std::to_string(max_value) + "]");
  }
  return std::min(std::max(value, 0.0), max_value) / max_value;
}

}  // namespace ot
