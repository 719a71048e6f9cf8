#include "ot/inference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ot/parallel.hpp"
#include "ot/transport.hpp"

namespace ot {

namespace {

constexpr int kMaxAttempts = 8;

void validate_config(const BootstrapConfig& cfg) {
  if (cfg.replications < 1) {
    throw OutOfRangeError("bootstrap replications must be >= 1");
  }
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    throw OutOfRangeError("alpha must lie strictly between 0 and 1");
  }
}

void check_samples(const ObservedSample& source, const ObservedSample& target) {
  if (source.categories() != target.categories()) {
    throw DimensionMismatchError("samples have different category counts");
  }
}

double uniform01(std::mt19937_64& rng) {
  // 53 uniform bits; identical across standard library implementations.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

MarginalBox box_for(const ObservedSample& s, const std::optional<double>& override_p) {
  return override_p ? identified_set(s, *override_p) : identified_set(s);
}

// Raw per-replication material. Cell bounds are stored flattened (lower
// bounds then upper bounds, each K*K row-major) when requested.
struct Draws {
  std::vector<double> d_low;
  std::vector<double> d_up;
  std::vector<std::vector<double>> lo_l, hi_l;  // Lower endpoint cells
  std::vector<std::vector<double>> lo_u, hi_u;  // Upper endpoint cells
  std::vector<std::pair<int, int>> retries;
};

void flatten_bounds(const CellBoundsMatrix& b, std::vector<double>& lo, std::vector<double>& hi) {
  int k = b.categories();
  lo.resize(static_cast<size_t>(k) * k);
  hi.resize(static_cast<size_t>(k) * k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      lo[static_cast<size_t>(i) * k + j] = b.at(i, j).lo;
      hi[static_cast<size_t>(i) * k + j] = b.at(i, j).hi;
    }
  }
}

Draws run_bootstrap(const ObservedSample& source, const ObservedSample& target,
                    const BootstrapConfig& cfg, const ResponseOverrides& overrides,
                    bool want_cells) {
  int b_count = cfg.replications;
  Draws draws;
  draws.d_low.resize(b_count);
  draws.d_up.resize(b_count);
  if (want_cells) {
    draws.lo_l.resize(b_count);
    draws.hi_l.resize(b_count);
    draws.lo_u.resize(b_count);
    draws.hi_u.resize(b_count);
  }
  std::vector<int> attempts_used(b_count, 1);

  parallel_for(b_count, [&](int idx) {
    int b = idx + 1;  // replications are 1-based in the seed derivation
    for (int attempt = 0;; ++attempt) {
      try {
        std::mt19937_64 rng(detail::replication_seed(cfg.seed, b, attempt, b_count));
        ObservedSample rs = resample(source, rng);
        ObservedSample rt = resample(target, rng);
        MarginalBox box_mu = box_for(rs, overrides.source);
        MarginalBox box_nu = box_for(rt, overrides.target);
        IdentifiedInterval interval = detail::discrepancy_endpoints(box_mu, box_nu, 1);
        draws.d_low[idx] = interval.d_low;
        draws.d_up[idx] = interval.d_up;
        if (want_cells) {
          EndpointCouplingBounds lower = detail::endpoint_coupling_bounds(
              box_mu, box_nu, Endpoint::Lower, interval, 1);
          EndpointCouplingBounds upper = detail::endpoint_coupling_bounds(
              box_mu, box_nu, Endpoint::Upper, interval, 1);
          flatten_bounds(lower.bounds, draws.lo_l[idx], draws.hi_l[idx]);
          flatten_bounds(upper.bounds, draws.lo_u[idx], draws.hi_u[idx]);
        }
        return;
      } catch (const InternalError&) {
        // Guarded recovery: recompute with the next derived seed. Not
        // expected to trigger for valid resamples.
        if (attempt + 1 >= kMaxAttempts) throw;
        attempts_used[idx] = attempt + 2;
      }
    }
  });

  for (int idx = 0; idx < b_count; ++idx) {
    if (attempts_used[idx] > 1) draws.retries.emplace_back(idx + 1, attempts_used[idx]);
  }
  return draws;
}

Interval interval_ci(const IdentifiedInterval& point, double c, int k) {
  double lo = std::max(0.0, point.d_low - c);
  double hi = std::min(static_cast<double>(k - 1), point.d_up + c);
  return Interval(lo, std::max(lo, hi));
}

CellBoundsMatrix expand_cells(const CellBoundsMatrix& center, const std::vector<double>& c_by_cell) {
  int k = center.categories();
  CellBoundsMatrix out(k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      double c = c_by_cell[static_cast<size_t>(i) * k + j];
      double lo = std::max(0.0, center.at(i, j).lo - c);
      double hi = std::min(1.0, center.at(i, j).hi + c);
      out.at(i, j) = Interval(lo, std::max(lo, hi));
    }
  }
  return out;
}

std::vector<double> interval_stats(const Draws& draws, const IdentifiedInterval& point) {
  std::vector<double> t(draws.d_low.size());
  for (size_t b = 0; b < draws.d_low.size(); ++b) {
    t[b] = std::max(point.d_low - draws.d_low[b], draws.d_up[b] - point.d_up);
  }
  return t;
}

// Per-cell maximal deviations for one endpoint.
std::vector<std::vector<double>> cell_stats(const std::vector<std::vector<double>>& lo,
                                            const std::vector<std::vector<double>>& hi,
                                            const CellBoundsMatrix& center) {
  int k = center.categories();
  size_t cells = static_cast<size_t>(k) * k;
  std::vector<std::vector<double>> t(cells, std::vector<double>(lo.size()));
  for (size_t b = 0; b < lo.size(); ++b) {
    for (size_t cell = 0; cell < cells; ++cell) {
      double center_lo = center.at(static_cast<int>(cell) / k, static_cast<int>(cell) % k).lo;
      double center_hi = center.at(static_cast<int>(cell) / k, static_cast<int>(cell) % k).hi;
      t[cell][b] = std::max(center_lo - lo[b][cell], hi[b][cell] - center_hi);
    }
  }
  return t;
}

}  // namespace

namespace detail {

std::uint64_t replication_seed(std::uint64_t seed, int replication, int attempt,
                               int replications) {
  return seed ^ (static_cast<std::uint64_t>(replication) +
                 static_cast<std::uint64_t>(attempt) * static_cast<std::uint64_t>(replications));
}

double critical_value(std::vector<double> stats, double alpha) {
  std::sort(stats.begin(), stats.end());
  auto b = static_cast<long>(stats.size());
  long rank = static_cast<long>(std::ceil((1.0 - alpha) * static_cast<double>(b)));
  rank = std::min(std::max(rank, 1L), b);
  // Floored at zero so confidence sets never shrink below the plug-in bounds.
  return std::max(0.0, stats[rank - 1]);
}

}  // namespace detail

ObservedSample resample(const ObservedSample& s, std::mt19937_64& rng) {
  int k = s.categories();
  std::int64_t n = s.n();
  // Cumulative unit counts; drawing a uniform unit index and mapping through
  // them is exactly a multinomial redraw of the aggregated rows.
  std::vector<std::int64_t> cum(k + 1);
  std::int64_t running = 0;
  for (int i = 0; i < k; ++i) {
    running += s.counts()[i];
    cum[i] = running;
  }
  cum[k] = n;

  std::vector<std::int64_t> counts(k, 0);
  std::int64_t missing = 0;
  for (std::int64_t d = 0; d < n; ++d) {
    auto unit = static_cast<std::int64_t>(uniform01(rng) * static_cast<double>(n));
    unit = std::min(unit, n - 1);
    int cell = static_cast<int>(std::upper_bound(cum.begin(), cum.end(), unit) - cum.begin());
    if (cell >= k) {
      ++missing;
    } else {
      ++counts[cell];
    }
  }
  return ObservedSample::from_counts(std::move(counts), missing);
}

InferenceReport run_inference(const ObservedSample& source, const ObservedSample& target,
                              const BootstrapConfig& cfg, const ResponseOverrides& overrides) {
  validate_config(cfg);
  check_samples(source, target);
  int k = source.categories();

  MarginalBox box_mu = box_for(source, overrides.source);
  MarginalBox box_nu = box_for(target, overrides.target);
  IdentifiedInterval point = discrepancy_endpoints(box_mu, box_nu);
  EndpointCouplingBounds point_lower =
      endpoint_coupling_bounds(box_mu, box_nu, Endpoint::Lower, point);
  EndpointCouplingBounds point_upper =
      endpoint_coupling_bounds(box_mu, box_nu, Endpoint::Upper, point);

  Draws draws = run_bootstrap(source, target, cfg, overrides, /*want_cells=*/true);

  double c_d = detail::critical_value(interval_stats(draws, point), cfg.alpha);

  auto stats_l = cell_stats(draws.lo_l, draws.hi_l, point_lower.bounds);
  auto stats_u = cell_stats(draws.lo_u, draws.hi_u, point_upper.bounds);
  size_t cells = stats_l.size();
  std::vector<double> c_l(cells), c_u(cells);
  for (size_t cell = 0; cell < cells; ++cell) {
    c_l[cell] = detail::critical_value(stats_l[cell], cfg.alpha);
    c_u[cell] = detail::critical_value(stats_u[cell], cfg.alpha);
  }

  // Joint statistic: the largest deviation across every cell of both
  // endpoints within a replication.
  std::vector<double> joint(draws.d_low.size(), 0.0);
  for (size_t b = 0; b < joint.size(); ++b) {
    double worst = 0.0;
    for (size_t cell = 0; cell < cells; ++cell) {
      worst = std::max(worst, std::max(stats_l[cell][b], stats_u[cell][b]));
    }
    joint[b] = worst;
  }
  double c_joint = detail::critical_value(joint, cfg.alpha);
  std::vector<double> c_joint_by_cell(cells, c_joint);

  InferenceReport report{
      point,
      interval_ci(point, c_d, k),
      point_lower,
      point_upper,
      expand_cells(point_lower.bounds, c_l),
      expand_cells(point_upper.bounds, c_u),
      expand_cells(point_lower.bounds, c_joint_by_cell),
      expand_cells(point_upper.bounds, c_joint_by_cell),
      {},
      std::move(draws.retries),
  };
  report.replication_log.reserve(draws.d_low.size());
  for (size_t b = 0; b < draws.d_low.size(); ++b) {
    report.replication_log.emplace_back(draws.d_low[b], draws.d_up[b]);
  }
  return report;
}

std::pair<IdentifiedInterval, Interval> confidence_set_d(const ObservedSample& source,
                                                         const ObservedSample& target,
                                                         const BootstrapConfig& cfg,
                                                         const ResponseOverrides& overrides) {
  validate_config(cfg);
  check_samples(source, target);
  MarginalBox box_mu = box_for(source, overrides.source);
  MarginalBox box_nu = box_for(target, overrides.target);
  IdentifiedInterval point = discrepancy_endpoints(box_mu, box_nu);
  Draws draws = run_bootstrap(source, target, cfg, overrides, /*want_cells=*/false);
  double c_d = detail::critical_value(interval_stats(draws, point), cfg.alpha);
  Interval ci = interval_ci(point, c_d, source.categories());
  return {std::move(point), ci};
}

CellBoundsMatrix confidence_cell_bounds(const ObservedSample& source, const ObservedSample& target,
                                        const BootstrapConfig& cfg, Endpoint endpoint,
                                        const ResponseOverrides& overrides) {
  InferenceReport report = run_inference(source, target, cfg, overrides);
  return endpoint == Endpoint::Lower ? report.cell_cis_lower : report.cell_cis_upper;
}

std::pair<CellBoundsMatrix, CellBoundsMatrix> simultaneous_cell_bounds(
    const ObservedSample& source, const ObservedSample& target, const BootstrapConfig& cfg,
    const ResponseOverrides& overrides) {
  InferenceReport report = run_inference(source, target, cfg, overrides);
  return {report.simultaneous_cis_lower, report.simultaneous_cis_upper};
}

}  // namespace ot
