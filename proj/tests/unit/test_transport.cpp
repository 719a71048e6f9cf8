#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "ot/lp.hpp"
#include "ot/transport.hpp"

using namespace ot;
using ot::testing::example_mu;
using ot::testing::example_nu;

namespace {

// Minimal transport cost via the solver: a different code path from the
// closed-form discrepancy and from the monotone sweep.
double lp_min_transport(const OrdinalDistribution& mu, const OrdinalDistribution& nu) {
  int k = mu.categories();
  lp::LinearProgram prog;
  prog.objective.resize(static_cast<size_t>(k) * k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) prog.objective[static_cast<size_t>(i) * k + j] = category_distance(i, j);
  }
  prog.eq_matrix = Matrix(2 * k, k * k);
  prog.eq_rhs.resize(2 * k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) prog.eq_matrix.at(i, i * k + j) = 1.0;
    prog.eq_rhs[i] = mu.prob(i);
  }
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < k; ++i) prog.eq_matrix.at(k + j, i * k + j) = 1.0;
    prog.eq_rhs[k + j] = nu.prob(j);
  }
  prog.var_lower.assign(static_cast<size_t>(k) * k, 0.0);
  prog.var_upper.assign(static_cast<size_t>(k) * k, 1.0);
  auto sol = lp::solve(prog);
  REQUIRE(sol.status == lp::Status::Optimal);
  return sol.objective_value;
}

}  // namespace

TEST_SUITE("transport") {

TEST_CASE("discrepancy of the running example") {
  CHECK(discrepancy(example_mu(), example_nu()) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(discrepancy(example_mu(), example_mu()) == 0.0);

  auto low = make_distribution({1.0, 0.0, 0.0, 0.0, 0.0});
  auto high = make_distribution({0.0, 0.0, 0.0, 0.0, 1.0});
  CHECK(discrepancy(low, high) == doctest::Approx(4.0));

  CHECK_THROWS_AS(discrepancy(low, example_mu()), DimensionMismatchError);
}

TEST_CASE("monotone coupling of the running example") {
  Coupling c = min_cost_coupling(example_mu(), example_nu());
  Matrix expected = ot::testing::adjacent_shift_coupling();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(c.at(i, j) == doctest::Approx(expected.at(i, j)).epsilon(1e-12));
    }
  }
  CHECK(transport_cost(c) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("monotone coupling of identical marginals is diagonal") {
  auto mu = make_distribution({0.5, 0.25, 0.25});
  Coupling c = min_cost_coupling(mu, mu);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(c.at(i, j) == doctest::Approx(i == j ? mu.prob(i) : 0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("monotone coupling attains the solver minimum") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    auto mu = ot::testing::random_distribution(5, rng);
    auto nu = ot::testing::random_distribution(5, rng);
    double nw = transport_cost(min_cost_coupling(mu, nu));
    CHECK(nw == doctest::Approx(lp_min_transport(mu, nu)).epsilon(1e-9));
    CHECK(nw == doctest::Approx(discrepancy(mu, nu)).epsilon(1e-9));
  }
}

TEST_CASE("cost functional") {
  CHECK(transport_cost(Coupling::from_mass(ot::testing::long_jump_coupling())) ==
        doctest::Approx(0.5).epsilon(1e-12));
  // Raw-matrix form: evaluable even on matrices that are not couplings.
  CHECK(transport_cost(ot::testing::distant_shift_matrix()) ==
        doctest::Approx(2.4).epsilon(1e-12));
  Matrix diag(3, 3);
  for (int i = 0; i < 3; ++i) diag.at(i, i) = 1.0 / 3.0;
  CHECK(transport_cost(diag) == 0.0);
}

TEST_CASE("cell bounds over all optimal couplings") {
  CellBoundsMatrix bounds = optimal_cell_bounds(example_mu(), example_nu());
  // Cell (1,3) differs across optimal couplings: 0 in one, 0.2 in another.
  CHECK(bounds.at(0, 2).contains(0.0, 1e-9));
  CHECK(bounds.at(0, 2).contains(0.2, 1e-9));
  CHECK(bounds.at(0, 2).lo == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(bounds.at(0, 2).hi == doctest::Approx(0.2).epsilon(1e-8));
  // No optimal coupling moves mass from category 4 to category 1.
  CHECK(bounds.at(3, 0).lo == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(bounds.at(3, 0).hi == doctest::Approx(0.0).epsilon(1e-9));
  // Both known optimal couplings fit cellwise.
  CHECK(bounds.contains(ot::testing::adjacent_shift_coupling(), 1e-8));
  CHECK(bounds.contains(ot::testing::long_jump_coupling(), 1e-8));
}

TEST_CASE("cell bounds collapse to the diagonal for identical marginals") {
  auto mu = make_distribution({0.4, 0.3, 0.2, 0.1});
  CellBoundsMatrix bounds = optimal_cell_bounds(mu, mu);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      double expected = i == j ? mu.prob(i) : 0.0;
      CHECK(bounds.at(i, j).lo == doctest::Approx(expected).epsilon(1e-8));
      CHECK(bounds.at(i, j).hi == doctest::Approx(expected).epsilon(1e-8));
    }
  }
}

TEST_CASE("maximal mobility of the running example") {
  auto [value, coupling] = max_mobility(example_mu(), example_nu());
  // Verified against exhaustive vertex enumeration below; the maximum over
  // couplings with these marginals is 1.7.
  CHECK(value == doctest::Approx(1.7).epsilon(1e-9));
  CHECK(transport_cost(coupling) == doctest::Approx(value).epsilon(1e-9));

  double best = 0.0;
  for (const Matrix& vertex : ot::testing::transportation_vertices(example_mu(), example_nu())) {
    best = std::max(best, transport_cost(vertex));
  }
  CHECK(value == doctest::Approx(best).epsilon(1e-9));
}

TEST_CASE("maximal mobility of a point mass is zero") {
  auto point = make_distribution({0.0, 1.0, 0.0});
  auto [value, coupling] = max_mobility(point, point);
  CHECK(value == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(coupling.at(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("maximal mobility matches vertex enumeration on random pairs") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    auto mu = ot::testing::random_distribution(4, rng);
    auto nu = ot::testing::random_distribution(4, rng);
    auto [value, coupling] = max_mobility(mu, nu);
    double best = 0.0;
    for (const Matrix& vertex : ot::testing::transportation_vertices(mu, nu)) {
      best = std::max(best, transport_cost(vertex));
    }
    CHECK(value == doctest::Approx(best).epsilon(1e-8));
    CHECK(discrepancy(mu, nu) <= value + 1e-9);
    CHECK(value <= 3.0 + 1e-9);
  }
}

TEST_CASE("frechet bounds") {
  CellBoundsMatrix f = frechet_cell_bounds(example_mu(), example_nu());
  CHECK(f.at(0, 1).hi == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(f.at(2, 0).hi == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(f.at(0, 0).lo == doctest::Approx(0.0));

  auto point = make_distribution({0.0, 1.0});
  CellBoundsMatrix g = frechet_cell_bounds(point, point);
  CHECK(g.at(1, 1).lo == doctest::Approx(1.0));
  CHECK(g.at(1, 1).hi == doctest::Approx(1.0));

  // The monotone coupling respects every cell, strictly inside at (1,2).
  Coupling nw = min_cost_coupling(example_mu(), example_nu());
  CHECK(f.contains(nw, 1e-12));
  CHECK(nw.at(0, 1) == doctest::Approx(0.2));
  CHECK(nw.at(0, 1) < f.at(0, 1).hi - 1e-6);
}

TEST_CASE("produced couplings satisfy frechet bounds on random pairs") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 25; ++trial) {
    int k = 2 + static_cast<int>(rng() % 4);
    auto mu = ot::testing::random_distribution(k, rng);
    auto nu = ot::testing::random_distribution(k, rng);
    CellBoundsMatrix f = frechet_cell_bounds(mu, nu);
    CHECK(f.contains(min_cost_coupling(mu, nu), 1e-9));
    auto [value, arg_max] = max_mobility(mu, nu);
    (void)value;
    CHECK(f.contains(arg_max, 1e-7));
    // Attainable-cell intervals are inside the frechet intervals too.
    CellBoundsMatrix opt = optimal_cell_bounds(mu, nu);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        CHECK(opt.at(i, j).lo >= f.at(i, j).lo - 1e-7);
        CHECK(opt.at(i, j).hi <= f.at(i, j).hi + 1e-7);
      }
    }
    CHECK(opt.contains(min_cost_coupling(mu, nu), 1e-7));
  }
}

TEST_CASE("normalized discrepancy") {
  CHECK(normalized_discrepancy(0.125, 4) == doctest::Approx(0.125 / 3.0).epsilon(1e-12));
  CHECK(normalized_discrepancy(0.316, 4) == doctest::Approx(0.316 / 3.0).epsilon(1e-12));
  CHECK(normalized_discrepancy(0.0, 7) == 0.0);
  CHECK_THROWS_AS(normalized_discrepancy(3.5, 4), OutOfRangeError);
  CHECK_THROWS_AS(normalized_discrepancy(-0.2, 4), OutOfRangeError);
}

TEST_CASE("closed form equals the solver minimum across sizes") {
  std::mt19937_64 rng(41);
  for (int k = 2; k <= 8; ++k) {
    for (int trial = 0; trial < 40; ++trial) {
      auto mu = ot::testing::random_distribution(k, rng);
      auto nu = ot::testing::random_distribution(k, rng);
      CHECK(discrepancy(mu, nu) == doctest::Approx(lp_min_transport(mu, nu)).epsilon(1e-8));
    }
  }
}

TEST_CASE("metric axioms on random triples") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 60; ++trial) {
    int k = 2 + static_cast<int>(rng() % 6);
    auto a = ot::testing::random_distribution(k, rng);
    auto b = ot::testing::random_distribution(k, rng);
    auto c = ot::testing::random_distribution(k, rng);
    CHECK(discrepancy(a, b) == doctest::Approx(discrepancy(b, a)).epsilon(1e-12));
    CHECK(discrepancy(a, a) == 0.0);
    CHECK(discrepancy(a, b) >= 0.0);
    CHECK(discrepancy(a, c) <= discrepancy(a, b) + discrepancy(b, c) + 1e-12);
  }
  // Identity of indiscernibles: zero discrepancy forces equal CDFs.
  auto a = make_distribution({0.3, 0.3, 0.4});
  auto b = make_distribution({0.3, 0.3 + 1e-12, 0.4 - 1e-12});
  CHECK(discrepancy(a, b) < 1e-11);
}

TEST_CASE("sandwich between minimal and maximal mobility") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 25; ++trial) {
    int k = 2 + static_cast<int>(rng() % 5);
    auto mu = ot::testing::random_distribution(k, rng);
    auto nu = ot::testing::random_distribution(k, rng);
    double d = discrepancy(mu, nu);
    auto [m, arg_max] = max_mobility(mu, nu);
    (void)arg_max;
    Matrix random_coupling = ot::testing::ipf_coupling(mu, nu, rng);
    double cost = transport_cost(random_coupling);
    CHECK(d <= cost + 1e-9);
    CHECK(cost <= m + 1e-9);
  }
}

}  // TEST_SUITE
