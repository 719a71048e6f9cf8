#include "ot/partialid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "ot/lp.hpp"
#include "ot/parallel.hpp"
#include "ot/transport.hpp"

namespace ot {

namespace {

constexpr double kCostEqualitySlack = 1e-9;

void check_equal_k(const MarginalBox& a, const MarginalBox& b) {
  if (a.categories() != b.categories()) {
    throw DimensionMismatchError("marginal boxes have different category counts (" +
                                 std::to_string(a.categories()) + " vs " +
                                 std::to_string(b.categories()) + ")");
  }
}

OrdinalDistribution distribution_from_lp(const std::vector<double>& x, int offset, int k) {
  std::vector<double> probs(k);
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    double v = std::max(x[offset + i], 0.0);
    probs[i] = v;
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw LpFailureError("marginal from the solver deviates from the simplex beyond tolerance");
  }
  for (double& p : probs) p /= sum;
  return make_distribution(std::move(probs));
}

// Lower endpoint: minimize sum_k t_k with t_k >= +-(F_gamma(k) - F_eta(k)),
// gamma and eta boxed and on the simplex. Layout: gamma (K), eta (K),
// t (K-1), then one surplus variable per threshold inequality.
lp::LpSolution solve_lower_endpoint(const MarginalBox& box_mu, const MarginalBox& box_nu) {
  int k = box_mu.categories();
  int kt = k - 1;
  int n = 2 * k + kt + 2 * kt;
  int m = 2 * kt + 2;
  lp::LinearProgram prog;
  prog.objective.assign(n, 0.0);
  for (int t = 0; t < kt; ++t) prog.objective[2 * k + t] = 1.0;
  prog.eq_matrix = Matrix(m, n);
  prog.eq_rhs.assign(m, 0.0);
  for (int t = 0; t < kt; ++t) {
    // t_t - F_gamma(t) + F_eta(t) - s+ = 0
    int row_plus = 2 * t;
    prog.eq_matrix.at(row_plus, 2 * k + t) = 1.0;
    for (int i = 0; i <= t; ++i) {
      prog.eq_matrix.at(row_plus, i) = -1.0;
      prog.eq_matrix.at(row_plus, k + i) = 1.0;
    }
    prog.eq_matrix.at(row_plus, 2 * k + kt + 2 * t) = -1.0;
    // t_t + F_gamma(t) - F_eta(t) - s- = 0
    int row_minus = 2 * t + 1;
    prog.eq_matrix.at(row_minus, 2 * k + t) = 1.0;
    for (int i = 0; i <= t; ++i) {
      prog.eq_matrix.at(row_minus, i) = 1.0;
      prog.eq_matrix.at(row_minus, k + i) = -1.0;
    }
    prog.eq_matrix.at(row_minus, 2 * k + kt + 2 * t + 1) = -1.0;
  }
  for (int i = 0; i < k; ++i) {
    prog.eq_matrix.at(2 * kt, i) = 1.0;
    prog.eq_matrix.at(2 * kt + 1, k + i) = 1.0;
  }
  prog.eq_rhs[2 * kt] = 1.0;
  prog.eq_rhs[2 * kt + 1] = 1.0;

  prog.var_lower.assign(n, 0.0);
  prog.var_upper.assign(n, lp::kInf);
  for (int i = 0; i < k; ++i) {
    prog.var_lower[i] = box_mu.lower(i);
    prog.var_upper[i] = box_mu.upper(i);
    prog.var_lower[k + i] = box_nu.lower(i);
    prog.var_upper[k + i] = box_nu.upper(i);
  }
  for (int t = 0; t < kt; ++t) prog.var_upper[2 * k + t] = 1.0;

  lp::LpSolution sol = lp::solve(prog);
  if (sol.status != lp::Status::Optimal) {
    throw InfeasibleBoxError("lower-endpoint program infeasible: a box misses the simplex");
  }
  return sol;
}

// One sign-pattern program for the upper endpoint: maximize
// sum_k s_k (F_gamma(k) - F_eta(k)) over the boxed simplices. The category
// coefficient is the signed count of thresholds at or above it.
lp::LinearProgram sign_pattern_program(const MarginalBox& box_mu, const MarginalBox& box_nu,
                                       std::uint64_t pattern) {
  int k = box_mu.categories();
  int kt = k - 1;
  lp::LinearProgram prog;
  prog.objective.assign(2 * static_cast<size_t>(k), 0.0);
  for (int c = 0; c < k; ++c) {
    double coef = 0.0;
    for (int t = c; t < kt; ++t) {
      coef += ((pattern >> t) & 1u) ? 1.0 : -1.0;
    }
    prog.objective[c] = coef;
    prog.objective[k + c] = -coef;
  }
  prog.eq_matrix = Matrix(2, 2 * k);
  prog.eq_rhs = {1.0, 1.0};
  for (int i = 0; i < k; ++i) {
    prog.eq_matrix.at(0, i) = 1.0;
    prog.eq_matrix.at(1, k + i) = 1.0;
  }
  prog.var_lower.resize(2 * static_cast<size_t>(k));
  prog.var_upper.resize(2 * static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    prog.var_lower[i] = box_mu.lower(i);
    prog.var_upper[i] = box_mu.upper(i);
    prog.var_lower[k + i] = box_nu.lower(i);
    prog.var_upper[k + i] = box_nu.upper(i);
  }
  prog.sense = lp::Sense::Maximize;
  return prog;
}

}  // namespace

MarginalBox identified_set(const ObservedSample& s) {
  int k = s.categories();
  if (s.observed() == 0) {
    // Vacuous but correct: every distribution is consistent with the data.
    return MarginalBox::from_bounds(std::vector<double>(k, 0.0), std::vector<double>(k, 1.0));
  }
  double n = static_cast<double>(s.n());
  double width = static_cast<double>(s.missing()) / n;
  std::vector<double> lower(k), upper(k);
  for (int i = 0; i < k; ++i) {
    lower[i] = static_cast<double>(s.counts()[i]) / n;  // p-hat * observed share
    upper[i] = std::min(1.0, lower[i] + width);
  }
  return MarginalBox::from_bounds(std::move(lower), std::move(upper));
}

MarginalBox identified_set(const ObservedSample& s, double response_prob) {
  if (!(response_prob >= 0.0 && response_prob <= 1.0)) {
    throw OutOfRangeError("response probability must lie in [0, 1]");
  }
  int k = s.categories();
  if (s.observed() == 0) {
    return MarginalBox::from_bounds(std::vector<double>(k, 0.0), std::vector<double>(k, 1.0));
  }
  OrdinalDistribution obs = s.observed_distribution();
  std::vector<double> lower(k), upper(k);
  for (int i = 0; i < k; ++i) {
    lower[i] = response_prob * obs.prob(i);
    upper[i] = std::min(1.0, lower[i] + (1.0 - response_prob));
  }
  return MarginalBox::from_bounds(std::move(lower), std::move(upper));
}

std::vector<Interval> cdf_bounds(const MarginalBox& box) {
  int k = box.categories();
  double width = box.width();
  std::vector<Interval> out;
  out.reserve(k - 1);
  double prefix = 0.0;
  for (int t = 0; t + 1 < k; ++t) {
    prefix += box.lower(t);
    double lo = std::min(1.0, std::max(0.0, prefix));
    double hi = std::min(1.0, std::max(lo, prefix + width));
    out.emplace_back(lo, hi);
  }
  return out;
}

namespace detail {

IdentifiedInterval discrepancy_endpoints(const MarginalBox& box_mu, const MarginalBox& box_nu,
                                         int threads) {
  check_equal_k(box_mu, box_nu);
  int k = box_mu.categories();
  if (k > kMaxCategories) {
    throw KTooLargeError("K exceeds the supported maximum of " + std::to_string(kMaxCategories));
  }

  lp::LpSolution lower_sol = solve_lower_endpoint(box_mu, box_nu);
  double d_low = std::max(0.0, lower_sol.objective_value);
  auto witness_low = std::make_pair(distribution_from_lp(lower_sol.x, 0, k),
                                    distribution_from_lp(lower_sol.x, k, k));

  // Upper endpoint: scan the sign patterns in fixed ascending order; the
  // lowest pattern index wins ties, independent of the chunking.
  std::uint64_t pattern_count = std::uint64_t{1} << (k - 1);
  int chunks = static_cast<int>(std::min<std::uint64_t>(pattern_count,
                                                        static_cast<std::uint64_t>(threads) * 8));
  chunks = std::max(chunks, 1);
  std::vector<double> chunk_best(chunks);
  std::vector<std::uint64_t> chunk_pattern(chunks);
  parallel_for(chunks, threads, [&](int chunk) {
    std::uint64_t begin = pattern_count * chunk / chunks;
    std::uint64_t end = pattern_count * (chunk + 1) / chunks;
    double best = -std::numeric_limits<double>::infinity();
    std::uint64_t best_pattern = begin;
    for (std::uint64_t p = begin; p < end; ++p) {
      lp::LpSolution sol = lp::solve(sign_pattern_program(box_mu, box_nu, p));
      if (sol.status != lp::Status::Optimal) {
        throw InfeasibleBoxError("sign-pattern program infeasible: a box misses the simplex");
      }
      if (sol.objective_value > best) {
        best = sol.objective_value;
        best_pattern = p;
      }
    }
    chunk_best[chunk] = best;
    chunk_pattern[chunk] = best_pattern;
  });
  double d_up = -std::numeric_limits<double>::infinity();
  std::uint64_t winning_pattern = 0;
  for (int c = 0; c < chunks; ++c) {
    if (chunk_best[c] > d_up) {
      d_up = chunk_best[c];
      winning_pattern = chunk_pattern[c];
    }
  }
  lp::LpSolution upper_sol = lp::solve(sign_pattern_program(box_mu, box_nu, winning_pattern));
  d_up = std::min(std::max(upper_sol.objective_value, d_low), static_cast<double>(k - 1));
  auto witness_up = std::make_pair(distribution_from_lp(upper_sol.x, 0, k),
                                   distribution_from_lp(upper_sol.x, k, k));

  return IdentifiedInterval{d_low, d_up, std::move(witness_low), std::move(witness_up)};
}

EndpointCouplingBounds endpoint_coupling_bounds(const MarginalBox& box_mu,
                                                const MarginalBox& box_nu, Endpoint endpoint,
                                                const IdentifiedInterval& interval, int threads) {
  check_equal_k(box_mu, box_nu);
  int k = box_mu.categories();
  double value = (endpoint == Endpoint::Lower) ? interval.d_low : interval.d_up;

  // Variables: pi (K^2 in [0,1]), row sums boxed by the source set, column
  // sums boxed by the target set, and the attained cost pinned to the
  // endpoint value. The marginals appear only through these sums, which is
  // exact for the endpoint-conditioned constraint sets.
  int n = k * k + 2 * k + 1;
  int m = 2 * k + 2;
  lp::LinearProgram base;
  base.objective.assign(n, 0.0);
  base.eq_matrix = Matrix(m, n);
  base.eq_rhs.assign(m, 0.0);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) base.eq_matrix.at(i, i * k + j) = 1.0;
    base.eq_matrix.at(i, k * k + i) = -1.0;
  }
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < k; ++i) base.eq_matrix.at(k + j, i * k + j) = 1.0;
    base.eq_matrix.at(k + j, k * k + k + j) = -1.0;
  }
  for (int cell = 0; cell < k * k; ++cell) base.eq_matrix.at(2 * k, cell) = 1.0;
  base.eq_rhs[2 * k] = 1.0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      base.eq_matrix.at(2 * k + 1, i * k + j) = category_distance(i, j);
    }
  }
  base.eq_matrix.at(2 * k + 1, k * k + 2 * k) = -1.0;

  base.var_lower.assign(n, 0.0);
  base.var_upper.assign(n, 1.0);
  for (int i = 0; i < k; ++i) {
    base.var_lower[k * k + i] = box_mu.lower(i);
    base.var_upper[k * k + i] = box_mu.upper(i);
    base.var_lower[k * k + k + i] = box_nu.lower(i);
    base.var_upper[k * k + k + i] = box_nu.upper(i);
  }
  base.var_lower[k * k + 2 * k] = std::max(0.0, value - kCostEqualitySlack);
  base.var_upper[k * k + 2 * k] = value + kCostEqualitySlack;

  std::vector<double> results(static_cast<size_t>(2) * k * k);
  parallel_for(2 * k * k, threads, [&](int task) {
    int cell = task / 2;
    bool maximize = (task % 2) == 1;
    lp::LinearProgram prog = base;
    prog.objective[cell] = 1.0;
    prog.sense = maximize ? lp::Sense::Maximize : lp::Sense::Minimize;
    lp::LpSolution sol = lp::solve(prog);
    if (sol.status != lp::Status::Optimal) {
      throw InfeasibleEndpointError("endpoint value not attainable by any boxed coupling");
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

  const auto& witness =
      (endpoint == Endpoint::Lower) ? interval.witness_low : interval.witness_up;
  Coupling representative = min_cost_coupling(witness.first, witness.second);
  if (!bounds.contains(representative, 1e-7)) {
    throw LpFailureError("representative coupling escapes its own cell bounds");
  }
  return EndpointCouplingBounds{endpoint, value, std::move(bounds), std::move(representative)};
}

}  // namespace detail

IdentifiedInterval discrepancy_endpoints(const MarginalBox& box_mu, const MarginalBox& box_nu) {
  return detail::discrepancy_endpoints(box_mu, box_nu, resolve_thread_count());
}

EndpointCouplingBounds endpoint_coupling_bounds(const MarginalBox& box_mu,
                                                const MarginalBox& box_nu, Endpoint endpoint) {
  IdentifiedInterval interval = discrepancy_endpoints(box_mu, box_nu);
  return detail::endpoint_coupling_bounds(box_mu, box_nu, endpoint, interval,
                                          resolve_thread_count());
}

EndpointCouplingBounds endpoint_coupling_bounds(const MarginalBox& box_mu,
                                                const MarginalBox& box_nu, Endpoint endpoint,
                                                const IdentifiedInterval& interval) {
  return detail::endpoint_coupling_bounds(box_mu, box_nu, endpoint, interval,
                                          resolve_thread_count());
}

}  // namespace ot
