#include <doctest.h>

#include <cstring>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "ot/lp.hpp"

using namespace ot;
using namespace ot::lp;

namespace {

LinearProgram simple_lp(std::vector<double> objective, Matrix a, std::vector<double> b,
                        std::vector<double> lower, std::vector<double> upper,
                        Sense sense = Sense::Minimize) {
  LinearProgram prog;
  prog.objective = std::move(objective);
  prog.eq_matrix = std::move(a);
  prog.eq_rhs = std::move(b);
  prog.var_lower = std::move(lower);
  prog.var_upper = std::move(upper);
  prog.sense = sense;
  return prog;
}

// Random integer-data program with box bounds; roughly half are built around
// a known feasible point.
LinearProgram random_lp(std::mt19937_64& rng) {
  int n = 2 + static_cast<int>(rng() % 5);  // 2..6
  int m = 1 + static_cast<int>(rng() % 4);  // 1..4
  LinearProgram prog;
  prog.objective.resize(n);
  for (double& c : prog.objective) c = static_cast<double>(static_cast<int>(rng() % 11)) - 5.0;
  prog.eq_matrix = Matrix(m, n);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < n; ++c) {
      prog.eq_matrix.at(r, c) = static_cast<double>(static_cast<int>(rng() % 7)) - 3.0;
    }
  }
  prog.var_lower.assign(n, 0.0);
  prog.var_upper.resize(n);
  for (double& u : prog.var_upper) u = 1.0 + static_cast<double>(rng() % 5);
  prog.eq_rhs.resize(m);
  if (rng() % 2 == 0) {
    std::vector<double> x0(n);
    for (int j = 0; j < n; ++j) x0[j] = static_cast<double>(rng() % 3);
    for (int r = 0; r < m; ++r) {
      double v = 0.0;
      for (int j = 0; j < n; ++j) v += prog.eq_matrix.at(r, j) * std::min(x0[j], prog.var_upper[j]);
      prog.eq_rhs[r] = v;
    }
  } else {
    for (double& b : prog.eq_rhs) b = static_cast<double>(static_cast<int>(rng() % 9)) - 4.0;
  }
  return prog;
}

}  // namespace

TEST_SUITE("lp") {

TEST_CASE("bounds force the optimum") {
  Matrix a(1, 2);
  a.at(0, 0) = 1.0;
  a.at(0, 1) = 1.0;
  auto sol = solve(simple_lp({1.0, 0.0}, a, {1.0}, {0.0, 0.0}, {1.0, 1.0}));
  REQUIRE(sol.status == Status::Optimal);
  CHECK(sol.objective_value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sol.x[0] == doctest::Approx(0.0));
  CHECK(sol.x[1] == doctest::Approx(1.0));
}

TEST_CASE("maximization by negation") {
  Matrix a(1, 2);
  a.at(0, 0) = 1.0;
  a.at(0, 1) = 1.0;
  auto sol = solve(simple_lp({1.0, 1.0}, a, {1.0}, {0.0, 0.0}, {1.0, 1.0}, Sense::Maximize));
  REQUIRE(sol.status == Status::Optimal);
  CHECK(sol.objective_value == doctest::Approx(1.0));
}

TEST_CASE("no equality rows") {
  auto sol = solve(simple_lp({1.0}, Matrix(0, 1), {}, {2.0}, {5.0}));
  REQUIRE(sol.status == Status::Optimal);
  CHECK(sol.objective_value == doctest::Approx(2.0));
}

TEST_CASE("infeasible and unbounded statuses") {
  Matrix a(1, 2);
  a.at(0, 0) = 1.0;
  a.at(0, 1) = 1.0;
  auto infeasible = solve(simple_lp({1.0, 0.0}, a, {3.0}, {0.0, 0.0}, {1.0, 1.0}));
  CHECK(infeasible.status == Status::Infeasible);

  Matrix grow(1, 2);
  grow.at(0, 0) = 1.0;
  grow.at(0, 1) = -1.0;
  auto unbounded = solve(simple_lp({-1.0, 0.0}, grow, {0.0}, {0.0, 0.0}, {kInf, kInf}));
  CHECK(unbounded.status == Status::Unbounded);
}

TEST_CASE("free variables and one-sided bounds") {
  // x1 free: substitute x1 = 3 + x2, objective 3 + 2 x2, minimal at x2 = 0.
  Matrix a(1, 2);
  a.at(0, 0) = 1.0;
  a.at(0, 1) = -1.0;
  auto sol = solve(simple_lp({1.0, 1.0}, a, {3.0}, {-kInf, 0.0}, {kInf, 5.0}));
  REQUIRE(sol.status == Status::Optimal);
  CHECK(sol.objective_value == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(sol.x[0] == doctest::Approx(3.0));

  // Negative lower bounds: x1 = -x2 with x2 in [-1, 1].
  Matrix b(1, 2);
  b.at(0, 0) = 1.0;
  b.at(0, 1) = 1.0;
  auto neg = solve(simple_lp({1.0, 0.0}, b, {0.0}, {-2.0, -1.0}, {kInf, 1.0}));
  REQUIRE(neg.status == Status::Optimal);
  CHECK(neg.objective_value == doctest::Approx(-1.0).epsilon(1e-10));

  // Bounded maximization through a free-ish variable: x1 = x2 - 1 <= 2.
  Matrix c(1, 2);
  c.at(0, 0) = 1.0;
  c.at(0, 1) = -1.0;
  auto mx = solve(simple_lp({1.0, 1.0}, c, {-1.0}, {-kInf, 0.0}, {2.0, 3.0}, Sense::Maximize));
  REQUIRE(mx.status == Status::Optimal);
  CHECK(mx.objective_value == doctest::Approx(5.0).epsilon(1e-10));

  // A fully free minimization is unbounded.
  auto ub = solve(simple_lp({1.0}, Matrix(0, 1), {}, {-kInf}, {kInf}));
  CHECK(ub.status == Status::Unbounded);
}

TEST_CASE("duplicate rows") {
  // Redundant copy of the same equality: still optimal (the dependent row's
  // artificial stays parked at zero).
  Matrix a(2, 2);
  a.at(0, 0) = 1.0;
  a.at(0, 1) = 1.0;
  a.at(1, 0) = 1.0;
  a.at(1, 1) = 1.0;
  auto sol = solve(simple_lp({1.0, 0.0}, a, {1.0, 1.0}, {0.0, 0.0}, {1.0, 1.0}));
  REQUIRE(sol.status == Status::Optimal);
  CHECK(sol.objective_value == doctest::Approx(0.0).epsilon(1e-10));

  // Contradictory copy: infeasible.
  auto bad = solve(simple_lp({1.0, 0.0}, a, {1.0, 2.0}, {0.0, 0.0}, {1.0, 1.0}));
  CHECK(bad.status == Status::Infeasible);
}

TEST_CASE("dimension faults") {
  Matrix a(1, 2);
  CHECK_THROWS_AS(solve(simple_lp({1.0}, a, {1.0}, {0.0}, {1.0})), DimensionMismatchError);
  Matrix b(1, 1);
  CHECK_THROWS_AS(solve(simple_lp({1.0}, b, {1.0}, {2.0}, {1.0})), DimensionMismatchError);
}

// The lower endpoint of the identified interval for the nonresponse example,
// written out as an explicit program: variables gamma(4), eta(4), t(3) and
// six surplus variables, objective sum t. Known value 0.325.
TEST_CASE("endpoint program attains its documented value") {
  MarginalBox bm = ot::testing::example_box_mu();
  MarginalBox bn = ot::testing::example_box_nu();
  int k = 4, kt = 3;
  int n = 2 * k + kt + 2 * kt;
  LinearProgram prog;
  prog.objective.assign(n, 0.0);
  for (int t = 0; t < kt; ++t) prog.objective[2 * k + t] = 1.0;
  prog.eq_matrix = Matrix(2 * kt + 2, n);
  prog.eq_rhs.assign(2 * kt + 2, 0.0);
  for (int t = 0; t < kt; ++t) {
    for (int i = 0; i <= t; ++i) {
      prog.eq_matrix.at(2 * t, i) = -1.0;
      prog.eq_matrix.at(2 * t, k + i) = 1.0;
      prog.eq_matrix.at(2 * t + 1, i) = 1.0;
      prog.eq_matrix.at(2 * t + 1, k + i) = -1.0;
    }
    prog.eq_matrix.at(2 * t, 2 * k + t) = 1.0;
    prog.eq_matrix.at(2 * t + 1, 2 * k + t) = 1.0;
    prog.eq_matrix.at(2 * t, 2 * k + kt + 2 * t) = -1.0;
    prog.eq_matrix.at(2 * t + 1, 2 * k + kt + 2 * t + 1) = -1.0;
  }
  for (int i = 0; i < k; ++i) {
    prog.eq_matrix.at(2 * kt, i) = 1.0;
    prog.eq_matrix.at(2 * kt + 1, k + i) = 1.0;
  }
  prog.eq_rhs[2 * kt] = 1.0;
  prog.eq_rhs[2 * kt + 1] = 1.0;
  prog.var_lower.assign(n, 0.0);
  prog.var_upper.assign(n, kInf);
  for (int i = 0; i < k; ++i) {
    prog.var_lower[i] = bm.lower(i);
    prog.var_upper[i] = bm.upper(i);
    prog.var_lower[k + i] = bn.lower(i);
    prog.var_upper[k + i] = bn.upper(i);
  }
  auto sol = solve(prog);
  REQUIRE(sol.status == Status::Optimal);
  CHECK(sol.objective_value == doctest::Approx(0.325).epsilon(1e-10));
}

TEST_CASE("random programs match vertex enumeration") {
  std::mt19937_64 rng(2024);
  int optimal_seen = 0, infeasible_seen = 0;
  for (int trial = 0; trial < 300; ++trial) {
    LinearProgram prog = random_lp(rng);
    auto oracle = ot::testing::brute_force_optimum(prog);
    auto sol = solve(prog);
    if (oracle.has_value()) {
      ++optimal_seen;
      REQUIRE_MESSAGE(sol.status == Status::Optimal, "trial ", trial);
      CHECK_MESSAGE(sol.objective_value == doctest::Approx(*oracle).epsilon(1e-8), "trial ",
                    trial);
    } else {
      ++infeasible_seen;
      CHECK_MESSAGE(sol.status == Status::Infeasible, "trial ", trial);
    }
  }
  // The generator must exercise both outcomes.
  CHECK(optimal_seen > 50);
  CHECK(infeasible_seen > 20);
}

TEST_CASE("optimal solutions satisfy residual and bound tolerances") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    LinearProgram prog = random_lp(rng);
    auto sol = solve(prog);
    if (sol.status != Status::Optimal) continue;
    int n = static_cast<int>(prog.objective.size());
    double recomputed = 0.0;
    for (int j = 0; j < n; ++j) recomputed += prog.objective[j] * sol.x[j];
    CHECK(std::abs(recomputed - sol.objective_value) < 1e-9);
    for (int r = 0; r < prog.eq_matrix.rows(); ++r) {
      double ax = 0.0;
      for (int j = 0; j < n; ++j) ax += prog.eq_matrix.at(r, j) * sol.x[j];
      CHECK(std::abs(ax - prog.eq_rhs[r]) < 1e-8);
    }
    for (int j = 0; j < n; ++j) {
      CHECK(sol.x[j] >= prog.var_lower[j] - 1e-10);
      CHECK(sol.x[j] <= prog.var_upper[j] + 1e-10);
    }
  }
}

TEST_CASE("identical inputs give bit-identical solutions") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    LinearProgram prog = random_lp(rng);
    auto a = solve(prog);
    auto b = solve(prog);
    REQUIRE(a.status == b.status);
    if (a.status != Status::Optimal) continue;
    REQUIRE(a.x.size() == b.x.size());
    CHECK(std::memcmp(a.x.data(), b.x.data(), a.x.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(&a.objective_value, &b.objective_value, sizeof(double)) == 0);
  }
}

// A classic degenerate instance on which greedy pivoting cycles; Bland's
// rule must terminate at the optimum. Slack variables turn the three
// inequalities into equalities. Value -0.05, cross-checked by enumeration.
TEST_CASE("degenerate cycling-prone instance terminates") {
  int n = 7, m = 3;
  LinearProgram prog;
  prog.objective = {-0.75, 150.0, -0.02, 6.0, 0.0, 0.0, 0.0};
  prog.eq_matrix = Matrix(m, n);
  double rows[3][7] = {
      {0.25, -60.0, -1.0 / 25.0, 9.0, 1.0, 0.0, 0.0},
      {0.5, -90.0, -1.0 / 50.0, 3.0, 0.0, 1.0, 0.0},
      {0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0},
  };
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < n; ++c) prog.eq_matrix.at(r, c) = rows[r][c];
  }
  prog.eq_rhs = {0.0, 0.0, 1.0};
  prog.var_lower.assign(n, 0.0);
  prog.var_upper.assign(n, kInf);

  auto sol = solve(prog);
  REQUIRE(sol.status == Status::Optimal);
  CHECK(sol.objective_value == doctest::Approx(-0.05).epsilon(1e-10));
  auto oracle = ot::testing::brute_force_optimum(prog);
  REQUIRE(oracle.has_value());
  CHECK(sol.objective_value == doctest::Approx(*oracle).epsilon(1e-10));
}

}  // TEST_SUITE
