// Domain types for distributions over ordered categories and couplings
// between them, plus the elementary operations every other module builds on.
//
// Conventions: categories are 0-indexed internally and 1-indexed in every
// user-facing surface (CLI, report, error messages). All mass-balance and
// simplex checks use an absolute tolerance of 1e-9. K is capped at 32.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ot/errors.hpp"

namespace ot {

inline constexpr double kMassTolerance = 1e-9;
inline constexpr int kMaxCategories = 32;

// Dense row-major matrix. Small (K <= 32 in this library), so no attempt at
// anything clever.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}

  double& at(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  double at(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double lo_, double hi_);  // throws OutOfRangeError if lo > hi

  bool contains(double v, double tol = 0.0) const { return v >= lo - tol && v <= hi + tol; }
  double width() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

// Probability vector over K ordered categories.
class OrdinalDistribution {
 public:
  int categories() const { return static_cast<int>(probs_.size()); }
  double prob(int k) const { return probs_[k]; }
  const std::vector<double>& probs() const { return probs_; }

  bool operator==(const OrdinalDistribution&) const = default;

 private:
  friend OrdinalDistribution make_distribution(std::vector<double> probs);
  explicit OrdinalDistribution(std::vector<double> p) : probs_(std::move(p)) {}
  std::vector<double> probs_;
};

// Cumulative shares at or below each category; last entry is 1.
class StepCdf {
 public:
  int categories() const { return static_cast<int>(values_.size()); }
  double at_or_below(int k) const { return values_[k]; }
  const std::vector<double>& values() const { return values_; }

 private:
  friend StepCdf cdf(const OrdinalDistribution& d);
  explicit StepCdf(std::vector<double> v) : values_(std::move(v)) {}
  std::vector<double> values_;
};

// K x K joint mass matrix; entry (i, j) is mass moved from origin category i
// to destination category j.
class Coupling {
 public:
  // Validates nonnegativity and total mass 1 (within tolerance).
  static Coupling from_mass(Matrix mass);
  // Additionally checks row sums against mu and column sums against nu.
  static Coupling from_mass(Matrix mass, const OrdinalDistribution& mu,
                            const OrdinalDistribution& nu);

  int categories() const { return mass_.rows(); }
  double at(int i, int j) const { return mass_.at(i, j); }
  const Matrix& mass() const { return mass_; }

  bool operator==(const Coupling&) const = default;

 private:
  explicit Coupling(Matrix m) : mass_(std::move(m)) {}
  Matrix mass_;
};

// Category counts plus missing count from one observed cross-section.
class ObservedSample {
 public:
  static ObservedSample from_counts(std::vector<std::int64_t> counts, std::int64_t missing);

  int categories() const { return static_cast<int>(counts_.size()); }
  const std::vector<std::int64_t>& counts() const { return counts_; }
  std::int64_t missing() const { return missing_; }
  std::int64_t n() const { return n_; }
  std::int64_t observed() const { return n_ - missing_; }

  // Share of respondents with an observed outcome (p hat). 0 if all missing.
  double response_rate() const { return static_cast<double>(observed()) / static_cast<double>(n_); }

  // Empirical distribution among observed units. Throws if all missing.
  OrdinalDistribution observed_distribution() const;

  bool operator==(const ObservedSample&) const = default;

 private:
  ObservedSample(std::vector<std::int64_t> counts, std::int64_t missing, std::int64_t n)
      : counts_(std::move(counts)), missing_(missing), n_(n) {}
  std::vector<std::int64_t> counts_;
  std::int64_t missing_ = 0;
  std::int64_t n_ = 0;
};

// Per-category interval constraints defining an identified set of
// distributions. Construction fails unless the box intersects the simplex.
class MarginalBox {
 public:
  static MarginalBox from_bounds(std::vector<double> lower, std::vector<double> upper);

  int categories() const { return static_cast<int>(lower_.size()); }
  double lower(int k) const { return lower_[k]; }
  double upper(int k) const { return upper_[k]; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }

  // Uniform width upper_k - lower_k; equals the missing-mass share when the
  // box was built from a sample. Reported as the max width otherwise.
  double width() const;
  bool contains(const OrdinalDistribution& d, double tol = kMassTolerance) const;
  bool degenerate(double tol = kMassTolerance) const { return width() <= tol; }

  bool operator==(const MarginalBox&) const = default;

 private:
  MarginalBox(std::vector<double> lo, std::vector<double> hi)
      : lower_(std::move(lo)), upper_(std::move(hi)) {}
  std::vector<double> lower_;
  std::vector<double> upper_;
};

// K x K matrix of intervals.
class CellBoundsMatrix {
 public:
  CellBoundsMatrix() = default;
  explicit CellBoundsMatrix(int k) : k_(k), cells_(static_cast<size_t>(k) * k) {}

  int categories() const { return k_; }
  Interval& at(int i, int j) { return cells_[static_cast<size_t>(i) * k_ + j]; }
  const Interval& at(int i, int j) const { return cells_[static_cast<size_t>(i) * k_ + j]; }

  // Cellwise containment of a coupling's mass matrix.
  bool contains(const Matrix& mass, double tol = kMassTolerance) const;
  bool contains(const Coupling& c, double tol = kMassTolerance) const {
    return contains(c.mass(), tol);
  }

  bool operator==(const CellBoundsMatrix&) const = default;

 private:
  int k_ = 0;
  std::vector<Interval> cells_;
};

// Validated constructor for distributions. Entries within [-1e-12, 0) are
// snapped to zero; a total within 1e-9 of 1 is renormalized exactly, anything
// further off is rejected.
OrdinalDistribution make_distribution(std::vector<double> probs);

StepCdf cdf(const OrdinalDistribution& d);

// Row sums (origin marginal) and column sums (destination marginal).
std::pair<OrdinalDistribution, OrdinalDistribution> marginals(const Coupling& c);

}  // namespace ot
