#include "ot/types.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace ot {

namespace {

constexpr double kNegativeSnap = 1e-12;

void check_category_count(size_t k) {
  if (k < 2) {
    throw DimensionMismatchError("need at least 2 categories, got " + std::to_string(k));
  }
  if (k > static_cast<size_t>(kMaxCategories)) {
    throw KTooLargeError("K = " + std::to_string(k) + " exceeds the supported maximum of " +
                         std::to_string(kMaxCategories));
  }
}

}  // namespace

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
  if (!(lo <= hi)) {
    throw OutOfRangeError("interval lower end " + std::to_string(lo) +
                          " exceeds upper end " + std::to_string(hi));
  }
}

namespace {

// Sub-tolerance repair: rewrite the largest entry as one minus the rest.
// Unlike rescaling this is exactly idempotent, so rebuilding a valid
// distribution from its own probabilities is the identity.
void repair_total(std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  if (sum == 1.0) return;
  size_t pivot = 0;
  for (size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[pivot]) pivot = i;
  }
  double others = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i != pivot) others += values[i];
  }
  values[pivot] = 1.0 - others;
}

}  // namespace

OrdinalDistribution make_distribution(std::vector<double> probs) {
  check_category_count(probs.size());
  double sum = 0.0;
  for (size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] < -kNegativeSnap) {
      throw NegativeMassError("probability for category " + std::to_string(k + 1) +
                              " is negative (" + std::to_string(probs[k]) + ")");
    }
    if (probs[k] < 0.0) probs[k] = 0.0;
    sum += probs[k];
  }
  if (std::abs(sum - 1.0) > kMassTolerance) {
    throw NotNormalizedError("probabilities sum to " + std::to_string(sum) + ", expected 1");
  }
  repair_total(probs);
  return OrdinalDistribution(std::move(probs));
}

StepCdf cdf(const OrdinalDistribution& d) {
  std::vector<double> values(d.categories());
  double running = 0.0;
  for (int k = 0; k < d.categories(); ++k) {
    running += d.prob(k);
    values[k] = running;
  }
  values.back() = 1.0;  // exact by the distribution invariant
  return StepCdf(std::move(values));
}

Coupling Coupling::from_mass(Matrix mass) {
  if (mass.rows() != mass.cols()) {
    throw DimensionMismatchError("coupling matrix must be square, got " +
                                 std::to_string(mass.rows()) + "x" + std::to_string(mass.cols()));
  }
  check_category_count(static_cast<size_t>(mass.rows()));
  double total = 0.0;
  for (int i = 0; i < mass.rows(); ++i) {
    for (int j = 0; j < mass.cols(); ++j) {
      double v = mass.at(i, j);
      if (v < -kNegativeSnap) {
        throw NegativeMassError("coupling cell (" + std::to_string(i + 1) + "," +
                                std::to_string(j + 1) + ") is negative (" + std::to_string(v) +
                                ")");
      }
      if (v < 0.0) mass.at(i, j) = 0.0;
      total += mass.at(i, j);
    }
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw NotNormalizedError("coupling mass sums to " + std::to_string(total) + ", expected 1");
  }
  repair_total(mass.data());
  return Coupling(std::move(mass));
}

Coupling Coupling::from_mass(Matrix mass, const OrdinalDistribution& mu,
                             const OrdinalDistribution& nu) {
  if (mu.categories() != mass.rows() || nu.categories() != mass.cols()) {
    throw DimensionMismatchError("marginal length does not match coupling size");
  }
  Coupling c = from_mass(std::move(mass));
  for (int i = 0; i < c.categories(); ++i) {
    double row = 0.0, col = 0.0;
    for (int j = 0; j < c.categories(); ++j) {
      row += c.at(i, j);
      col += c.at(j, i);
    }
    if (std::abs(row - mu.prob(i)) > kMassTolerance) {
      throw NotNormalizedError("row " + std::to_string(i + 1) + " sums to " + std::to_string(row) +
                               ", expected marginal " + std::to_string(mu.prob(i)));
    }
    if (std::abs(col - nu.prob(i)) > kMassTolerance) {
      throw NotNormalizedError("column " + std::to_string(i + 1) + " sums to " +
                               std::to_string(col) + ", expected marginal " +
                               std::to_string(nu.prob(i)));
    }
  }
  return c;
}

ObservedSample ObservedSample::from_counts(std::vector<std::int64_t> counts,
                                           std::int64_t missing) {
  check_category_count(counts.size());
  if (missing < 0) {
    throw NegativeMassError("missing count is negative");
  }
  std::int64_t observed = 0;
  for (size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] < 0) {
      throw NegativeMassError("count for category " + std::to_string(k + 1) + " is negative");
    }
    observed += counts[k];
  }
  std::int64_t n = observed + missing;
  if (n < 1) {
    throw EmptyFileError("sample has no respondents");
  }
  return ObservedSample(std::move(counts), missing, n);
}

OrdinalDistribution ObservedSample::observed_distribution() const {
  std::int64_t obs = observed();
  if (obs == 0) {
    throw DataError("all responses missing; no observed distribution");
  }
  std::vector<double> probs(counts_.size());
  for (size_t k = 0; k < counts_.size(); ++k) {
    probs[k] = static_cast<double>(counts_[k]) / static_cast<double>(obs);
  }
  return make_distribution(std::move(probs));
}

MarginalBox MarginalBox::from_bounds(std::vector<double> lower, std::vector<double> upper) {
  check_category_count(lower.size());
  if (lower.size() != upper.size()) {
    throw DimensionMismatchError("lower and upper bound vectors differ in length");
  }
  double lo_sum = 0.0, hi_sum = 0.0;
  for (size_t k = 0; k < lower.size(); ++k) {
    if (!(0.0 <= lower[k] + kMassTolerance && lower[k] <= upper[k] + kMassTolerance &&
          upper[k] <= 1.0 + kMassTolerance)) {
      throw InfeasibleBoxError("bounds for category " + std::to_string(k + 1) +
                               " violate 0 <= lower <= upper <= 1");
    }
    lower[k] = std::max(lower[k], 0.0);
    upper[k] = std::min(upper[k], 1.0);
    if (lower[k] > upper[k]) lower[k] = upper[k];
    lo_sum += lower[k];
    hi_sum += upper[k];
  }
  if (lo_sum > 1.0 + kMassTolerance || hi_sum < 1.0 - kMassTolerance) {
    throw InfeasibleBoxError("box does not intersect the probability simplex (sum of lower " +
                             std::to_string(lo_sum) + ", sum of upper " + std::to_string(hi_sum) +
                             ")");
  }
  return MarginalBox(std::move(lower), std::move(upper));
}

double MarginalBox::width() const {
  double w = 0.0;
  for (size_t k = 0; k < lower_.size(); ++k) {
    w = std::max(w, upper_[k] - lower_[k]);
  }
  return w;
}

bool MarginalBox::contains(const OrdinalDistribution& d, double tol) const {
  if (d.categories() != categories()) return false;
  for (int k = 0; k < categories(); ++k) {
    if (d.prob(k) < lower_[k] - tol || d.prob(k) > upper_[k] + tol) return false;
  }
  return true;
}

bool CellBoundsMatrix::contains(const Matrix& mass, double tol) const {
  if (mass.rows() != k_ || mass.cols() != k_) return false;
  for (int i = 0; i < k_; ++i) {
    for (int j = 0; j < k_; ++j) {
      if (!at(i, j).contains(mass.at(i, j), tol)) return false;
    }
  }
  return true;
}

std::pair<OrdinalDistribution, OrdinalDistribution> marginals(const Coupling& c) {
  int k = c.categories();
  std::vector<double> rows(k, 0.0), cols(k, 0.0);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      rows[i] += c.at(i, j);
      cols[j] += c.at(i, j);
    }
  }
  return {make_distribution(std::move(rows)), make_distribution(std::move(cols))};
}

}  // namespace ot
