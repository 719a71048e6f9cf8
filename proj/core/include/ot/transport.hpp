// Point-identified transport objects for ordered categories under the
// threshold-crossing cost |i - j|: the discrepancy between two distributions
// (the L1 distance between their CDFs, equivalently the minimal transport
// cost), the monotone optimal coupling, per-cell bounds over the set of all
// optimal couplings, the maximal-mobility benchmark, and Frechet cell bounds.

#pragma once

#include <utility>

#include "ot/types.hpp"

namespace ot {

// Ordinal cost |i - j| between 0-indexed categories.
inline double category_distance(int i, int j) { return i >= j ? i - j : j - i; }

// Sum over thresholds of |F_mu(k) - F_nu(k)|; lies in [0, K-1].
double discrepancy(const OrdinalDistribution& mu, const OrdinalDistribution& nu);

// The monotone (northwest-corner) coupling. Its transport cost always equals
// discrepancy(mu, nu).
Coupling min_cost_coupling(const OrdinalDistribution& mu, const OrdinalDistribution& nu);

// Cost functional sum_ij |i - j| * m_ij; the Coupling overload is the
// validated form, the Matrix overload evaluates any square mass matrix.
double transport_cost(const Coupling& c);
double transport_cost(const Matrix& mass);

// For every cell, [min, max] of pi_ij over all couplings of (mu, nu) whose
// cost attains discrepancy(mu, nu). 2 K^2 linear programs.
CellBoundsMatrix optimal_cell_bounds(const OrdinalDistribution& mu,
                                     const OrdinalDistribution& nu);

// Maximum transport cost over all couplings of (mu, nu), with one attaining
// coupling (the solver's deterministic optimum).
std::pair<double, Coupling> max_mobility(const OrdinalDistribution& mu,
                                         const OrdinalDistribution& nu);

// Cell (i, j) = [max(0, mu_i + nu_j - 1), min(mu_i, nu_j)]; holds for every
// coupling of (mu, nu) whatsoever.
CellBoundsMatrix frechet_cell_bounds(const OrdinalDistribution& mu,
                                     const OrdinalDistribution& nu);

// value / (K - 1), the share of the maximum possible discrepancy.
double normalized_discrepancy(double value, int k);

namespace detail {
// Same as optimal_cell_bounds with an explicit worker count; the bootstrap
// runs these serially inside already-parallel replications.
CellBoundsMatrix optimal_cell_bounds(const OrdinalDistribution& mu, const OrdinalDistribution& nu,
                                     int threads);
}  // namespace detail

}  // namespace ot
