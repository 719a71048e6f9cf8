// Bootstrap inference for the identified discrepancy interval and the
// endpoint-conditioned coupling bounds. Samples are resampled with
// replacement (multinomially over the K categories plus the missing cell),
// every bound is recomputed per replication, and confidence sets expand the
// plug-in bounds by an empirical quantile of the maximal deviation.
//
// Replication b draws its generator from seed xor b, so results are
// independent of execution order; identical inputs give bit-identical
// reports.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "ot/partialid.hpp"
#include "ot/types.hpp"

namespace ot {

struct BootstrapConfig {
  int replications = 499;
  double alpha = 0.05;
  std::uint64_t seed = 0;
};

// Optional known response probabilities; estimated from each (re)sample when
// absent.
struct ResponseOverrides {
  std::optional<double> source;
  std::optional<double> target;
};

struct InferenceReport {
  IdentifiedInterval point;
  Interval ci_d;

  // Plug-in endpoint-conditioned bounds (the CI centers).
  EndpointCouplingBounds point_lower;
  EndpointCouplingBounds point_upper;

  // Per-cell confidence intervals, one quantile per cell and endpoint.
  CellBoundsMatrix cell_cis_lower;
  CellBoundsMatrix cell_cis_upper;

  // One joint quantile across every cell of both endpoints.
  CellBoundsMatrix simultaneous_cis_lower;
  CellBoundsMatrix simultaneous_cis_upper;

  // (d_low, d_up) per replication, in replication order.
  std::vector<std::pair<double, double>> replication_log;

  // (replication, attempts) for replications that needed reseeding.
  std::vector<std::pair<int, int>> retry_log;
};

// One multinomial redraw of the sample (same n, with replacement over the
// K + 1 cells including the missing one).
ObservedSample resample(const ObservedSample& s, std::mt19937_64& rng);

// Everything at once: interval CI, per-cell CIs, simultaneous CIs.
InferenceReport run_inference(const ObservedSample& source, const ObservedSample& target,
                              const BootstrapConfig& cfg, const ResponseOverrides& overrides = {});

// Plug-in interval plus its confidence interval [d_low - c, d_up + c].
std::pair<IdentifiedInterval, Interval> confidence_set_d(const ObservedSample& source,
                                                         const ObservedSample& target,
                                                         const BootstrapConfig& cfg,
                                                         const ResponseOverrides& overrides = {});

// Per-cell confidence intervals for one endpoint.
CellBoundsMatrix confidence_cell_bounds(const ObservedSample& source,
                                        const ObservedSample& target, const BootstrapConfig& cfg,
                                        Endpoint endpoint, const ResponseOverrides& overrides = {});

// Simultaneous confidence intervals for both endpoints (lower, upper).
std::pair<CellBoundsMatrix, CellBoundsMatrix> simultaneous_cell_bounds(
    const ObservedSample& source, const ObservedSample& target, const BootstrapConfig& cfg,
    const ResponseOverrides& overrides = {});

namespace detail {
// Seed for replication b (1-based); retries shift by whole blocks of B.
std::uint64_t replication_seed(std::uint64_t seed, int replication, int attempt, int replications);
// Ceiling order statistic at level 1 - alpha, floored at zero.
double critical_value(std::vector<double> stats, double alpha);
}  // namespace detail

}  // namespace ot
