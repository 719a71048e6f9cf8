// Shared fixtures: the running four-category example used across the tests,
// its known optimal couplings, and the nonresponse variant with a 0.95
// response rate on both sides.

#pragma once

#include "ot/partialid.hpp"
#include "ot/types.hpp"

namespace ot::testing {

inline OrdinalDistribution example_mu() { return make_distribution({0.4, 0.3, 0.2, 0.1}); }
inline OrdinalDistribution example_nu() { return make_distribution({0.2, 0.3, 0.3, 0.2}); }

inline Matrix matrix4(std::initializer_list<double> cells) {
  Matrix m(4, 4);
  int idx = 0;
  for (double v : cells) {
    m.at(idx / 4, idx % 4) = v;
    ++idx;
  }
  return m;
}

// Optimal coupling of the example marginals that only moves mass between
// adjacent categories (the monotone coupling); cost 0.5.
inline Matrix adjacent_shift_coupling() {
  return matrix4({0.2, 0.2, 0.0, 0.0,   //
                  0.0, 0.1, 0.2, 0.0,   //
                  0.0, 0.0, 0.1, 0.1,   //
                  0.0, 0.0, 0.0, 0.1});
}

// A second optimal coupling of the same marginals with a two-step jump from
// category 1 to category 3; cost 0.5 as well.
inline Matrix long_jump_coupling() {
  return matrix4({0.2, 0.0, 0.2, 0.0,   //
                  0.0, 0.3, 0.0, 0.0,   //
                  0.0, 0.0, 0.1, 0.1,   //
                  0.0, 0.0, 0.0, 0.1});
}

// Mass matrix that pushes weight toward distant categories. Deliberately NOT
// a coupling of the example marginals: its entries total 1.2 (row sums
// (0.4, 0.3, 0.3, 0.2), column sums (0.2, 0.3, 0.3, 0.4)). The cost
// functional evaluates to 2.4 on it. Kept verbatim as a rendering and
// cost-functional fixture.
inline Matrix distant_shift_matrix() {
  return matrix4({0.0, 0.0, 0.2, 0.2,   //
                  0.0, 0.0, 0.1, 0.2,   //
                  0.1, 0.2, 0.0, 0.0,   //
                  0.1, 0.1, 0.0, 0.0});
}

// Boxes for the example marginals observed with response rate 0.95 on both
// sides. The identified interval for D is [0.325, 0.625].
inline MarginalBox example_box_mu() {
  return MarginalBox::from_bounds({0.38, 0.285, 0.19, 0.095}, {0.43, 0.335, 0.24, 0.145});
}
inline MarginalBox example_box_nu() {
  return MarginalBox::from_bounds({0.19, 0.285, 0.285, 0.19}, {0.24, 0.335, 0.335, 0.24});
}

// Known couplings attaining the endpoints of [0.325, 0.625] for those boxes.
inline Matrix lower_endpoint_coupling() {
  return matrix4({0.24, 0.14, 0.00, 0.00,    //
                  0.00, 0.145, 0.14, 0.00,   //
                  0.00, 0.00, 0.145, 0.045,  //
                  0.00, 0.00, 0.00, 0.145});
}
inline Matrix upper_endpoint_coupling() {
  return matrix4({0.19, 0.24, 0.00, 0.00,    //
                  0.00, 0.045, 0.24, 0.00,   //
                  0.00, 0.00, 0.045, 0.145,  //
                  0.00, 0.00, 0.00, 0.095});
}

// The nonresponse example as integer samples: n = 2000, 100 missing, and
// observed shares matching the example marginals.
inline ObservedSample example_sample_mu() {
  return ObservedSample::from_counts({760, 570, 380, 190}, 100);
}
inline ObservedSample example_sample_nu() {
  return ObservedSample::from_counts({380, 570, 570, 380}, 100);
}

}  // namespace ot::testing
