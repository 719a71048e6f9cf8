// Partial identification under nonresponse: sharp per-category boxes for the
// marginal distributions, the identified interval [d_low, d_up] for the
// discrepancy (lower endpoint by a single linear program, upper endpoint by
// enumerating the 2^(K-1) threshold sign patterns), and per-cell flow bounds
// over the couplings that attain either endpoint.

#pragma once

#include <utility>
#include <vector>

#include "ot/types.hpp"

namespace ot {

enum class Endpoint { Lower, Upper };

struct IdentifiedInterval {
  double d_low;
  double d_up;
  // Marginal pairs (source, target) attaining each endpoint.
  std::pair<OrdinalDistribution, OrdinalDistribution> witness_low;
  std::pair<OrdinalDistribution, OrdinalDistribution> witness_up;
};

struct EndpointCouplingBounds {
  Endpoint endpoint;
  double endpoint_value;
  CellBoundsMatrix bounds;
  // One coupling attaining the endpoint: the monotone coupling of the
  // endpoint witness pair. Its cost equals endpoint_value.
  Coupling representative;
};

// Sharp identified set for the underlying distribution: lower_k is the
// observed share of category k among all sampled units, upper_k adds the
// missing-mass share. An all-missing sample yields the vacuous box [0,1]^K.
MarginalBox identified_set(const ObservedSample& s);

// Same with a known response probability instead of the estimated one.
MarginalBox identified_set(const ObservedSample& s, double response_prob);

// Interval for the CDF at each of the K-1 thresholds, clipped to [0,1].
// Assumes a box of constant width (as built from a sample).
std::vector<Interval> cdf_bounds(const MarginalBox& box);

IdentifiedInterval discrepancy_endpoints(const MarginalBox& box_mu, const MarginalBox& box_nu);

EndpointCouplingBounds endpoint_coupling_bounds(const MarginalBox& box_mu,
                                                const MarginalBox& box_nu, Endpoint endpoint);

// Reuses already-computed endpoints (witnesses included).
EndpointCouplingBounds endpoint_coupling_bounds(const MarginalBox& box_mu,
                                                const MarginalBox& box_nu, Endpoint endpoint,
                                                const IdentifiedInterval& interval);

namespace detail {
IdentifiedInterval discrepancy_endpoints(const MarginalBox& box_mu, const MarginalBox& box_nu,
                                         int threads);
EndpointCouplingBounds endpoint_coupling_bounds(const MarginalBox& box_mu,
                                                const MarginalBox& box_nu, Endpoint endpoint,
                                                const IdentifiedInterval& interval, int threads);
}  // namespace detail

}  // namespace ot
