// Self-contained dense linear-program solver:
//
//   optimize  c . x   subject to  A x = b,  l <= x <= u,
//
// with componentwise bounds that may be infinite. Two-phase primal simplex
// on the bounded-variable form with Bland's anti-cycling rule: the problem
// sizes in this library are tiny, so a deterministic, provably terminating
// pivot rule is worth more than speed. Maximization is handled by negating
// the objective. Infeasible and Unbounded are statuses, not exceptions;
// malformed inputs (inconsistent dimensions, crossed bounds) are faults.

#pragma once

#include <limits>
#include <vector>

#include "ot/types.hpp"

namespace ot::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { Minimize, Maximize };
enum class Status { Optimal, Infeasible, Unbounded };

struct LinearProgram {
  std::vector<double> objective;  // length n
  Matrix eq_matrix;               // m x n
  std::vector<double> eq_rhs;     // length m
  std::vector<double> var_lower;  // length n, entries may be -inf
  std::vector<double> var_upper;  // length n, entries may be +inf
  Sense sense = Sense::Minimize;
};

struct LpSolution {
  Status status = Status::Infeasible;
  std::vector<double> x;          // meaningful only when Optimal
  double objective_value = 0.0;   // equals objective . x when Optimal
};

// Deterministic: identical inputs give bit-identical solutions.
LpSolution solve(const LinearProgram& lp);

}  // namespace ot::lp
