#include <random>

#include "cpsp/linear.hpp"
#include "cpsp/lp.hpp"
#include "gtest/gtest.h"
#include "oracles.hpp"

namespace cpsp {
namespace {

IntVec iv(std::initializer_list<long> xs) {
  IntVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

Polytope unit_box(std::size_t n) {
  Polytope p(n);
  for (std::size_t i = 0; i < n; ++i) {
    p.add(LinIneq(unit(n, i), 0));
    p.add(LinIneq::at_most(unit(n, i), 1));
  }
  return p;
}

TEST(LpOptimumTest, BoxBound) {
  auto r = lp_optimum(unit_box(1), iv({1}), Direction::Maximize);
  ASSERT_TRUE(r.optimal());
  EXPECT_EQ(r.value, 1);
  EXPECT_EQ(r.witness[0], 1);
}

TEST(LpOptimumTest, UnboundedRay) {
  Polytope p(1, {LinIneq(iv({1}), 0)});
  auto r = lp_optimum(p, iv({1}), Direction::Maximize);
  EXPECT_EQ(r.status, LpStatus::Unbounded);
}

TEST(LpOptimumTest, ClausePolytopeMaximum) {
  Polytope p = unit_box(2);
  p.add(LinIneq(iv({1, 1}), 1));
  // Vertices (1,0), (0,1), (1,1): the maximum of x1+x2 is 2.
  auto oracle = oracle::fm_minimum(p, iv({-1, -1}));
  ASSERT_FALSE(oracle.infeasible);
  EXPECT_EQ(-oracle.value, 2);
  auto r = lp_optimum(p, iv({1, 1}), Direction::Maximize);
  ASSERT_TRUE(r.optimal());
  EXPECT_EQ(r.value, 2);
}

TEST(LpOptimumTest, InfeasibleCertificate) {
  Polytope p(1, {LinIneq(iv({2}), 1), LinIneq::at_most(iv({1}), 0)});
  auto r = lp_feasibility(p);
  ASSERT_TRUE(r.infeasible());
  EXPECT_TRUE(farkas_check(p.ineqs, r.dual, LinIneq::contradiction(1)));
}

TEST(LpOptimumTest, DimensionMismatchThrows) {
  EXPECT_THROW(lp_optimum(unit_box(2), iv({1}), Direction::Minimize), Error);
}

TEST(LpOptimumTest, AgreesWithFourierMotzkin) {
  std::mt19937 rng(7);
  int optimal = 0, infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 1 + rng() % 4;
    Polytope p = oracle::random_polytope(rng, n, 1 + rng() % 5, 4, 3);
    IntVec c(n);
    for (auto& v : c) v = static_cast<long>(rng() % 9) - 4;
    auto fm = oracle::fm_minimum(p, c);
    auto r = lp_optimum(p, c, Direction::Minimize);
    if (fm.infeasible) {
      EXPECT_TRUE(r.infeasible());
      ++infeasible;
      continue;
    }
    ASSERT_TRUE(r.optimal());
    EXPECT_EQ(r.value, fm.value);
    ++optimal;
    // Max / min duality on the same objective.
    auto mx = lp_optimum(p, c, Direction::Maximize);
    auto mn = lp_optimum(p, negate(c), Direction::Minimize);
    ASSERT_TRUE(mx.optimal());
    ASSERT_TRUE(mn.optimal());
    EXPECT_EQ(mx.value, -mn.value);
    // Dual recomputation reproduces the bound exactly.
    EXPECT_TRUE(farkas_check(p.ineqs, r.dual, LinIneq(c, r.value)));
  }
  EXPECT_GT(optimal, 50);
  EXPECT_GT(infeasible, 5);
}

TEST(LpOptimumTest, DegenerateLowerDimensionalPolytope) {
  // x1 + x2 = 1 inside the box: a segment.
  Polytope p = unit_box(2);
  p.add(LinIneq(iv({1, 1}), 1));
  p.add(LinIneq::at_most(iv({1, 1}), 1));
  auto r = lp_optimum(p, iv({1, 0}), Direction::Maximize);
  ASSERT_TRUE(r.optimal());
  EXPECT_EQ(r.value, 1);
}

TEST(FarkasCheckTest, ClauseAgainstFalsifyingBounds) {
  std::vector<LinIneq> rows{LinIneq(iv({1, 1}), 1), LinIneq(iv({-1, 0}), 0),
                            LinIneq(iv({0, -1}), 0)};
  EXPECT_TRUE(farkas_check(rows, {1, 1, 1}, LinIneq::contradiction(2)));
}

TEST(FarkasCheckTest, NonnegativityAloneIsNotAContradiction) {
  EXPECT_FALSE(farkas_check({LinIneq(iv({1}), 0)}, {1}, LinIneq::contradiction(1)));
}

TEST(FarkasCheckTest, NegativeMultiplierRejected) {
  std::vector<LinIneq> rows{LinIneq(iv({1}), 1), LinIneq(iv({1}), 0)};
  EXPECT_FALSE(farkas_check(rows, {1, -1}, LinIneq(iv({0}), 1)));
}

TEST(NullspaceTest, Examples) {
  auto v = nullspace_vector(std::vector<IntVec>{iv({1, 0, 0}), iv({0, 1, 0})}, 3);
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ((*v)[0], 0);
  EXPECT_EQ((*v)[1], 0);
  EXPECT_NE((*v)[2], 0);
  EXPECT_FALSE(nullspace_vector(std::vector<IntVec>{iv({1, 2}), iv({3, 4})}, 2).has_value());
}

TEST(NullspaceTest, RandomRowsAreExactlyOrthogonal) {
  std::mt19937 rng(3);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 2 + rng() % 6;
    std::size_t k = rng() % n;  // fewer than n rows: a vector must exist
    std::vector<IntVec> rows;
    for (std::size_t i = 0; i < k; ++i) {
      IntVec r(n);
      for (auto& x : r) x = static_cast<long>(rng() % 11) - 5;
      rows.push_back(r);
    }
    auto v = nullspace_vector(rows, n);
    ASSERT_TRUE(v.has_value());
    bool nonzero = false;
    for (const auto& x : *v) nonzero |= (x != 0);
    EXPECT_TRUE(nonzero);
    for (const auto& r : rows) EXPECT_EQ(dot(r, *v), 0);
  }
}

TEST(SolveModPTest, ContradictoryPair) {
  auto r = solve_mod_p({{1, 1}, {1, 1}}, {1, 0}, 2);
  ASSERT_TRUE(std::holds_alternative<ModPCertificate>(r));
  EXPECT_EQ(std::get<ModPCertificate>(r).alpha, (std::vector<long>{1, 1}));
}

TEST(SolveModPTest, SingleEquation) {
  auto r = solve_mod_p({{1}}, {1}, 2);
  ASSERT_TRUE(std::holds_alternative<ModPSolution>(r));
  EXPECT_EQ(std::get<ModPSolution>(r).x, std::vector<long>{1});
}

TEST(SolveModPTest, NonPrimeModulusRejected) {
  EXPECT_THROW(solve_mod_p({{1}}, {1}, 4), Error);
}

bool exhaustive_solvable(const std::vector<std::vector<long>>& a, const std::vector<long>& b,
                         long p, std::size_t n) {
  std::vector<long> x(n, 0);
  while (true) {
    bool ok = true;
    for (std::size_t i = 0; i < a.size() && ok; ++i) {
      long s = 0;
      for (std::size_t j = 0; j < n; ++j) s += a[i][j] * x[j];
      ok = ((s - b[i]) % p + p) % p == 0;
    }
    if (ok) return true;
    std::size_t k = 0;
    while (k < n && ++x[k] == p) x[k++] = 0;
    if (k == n) return false;
  }
}

TEST(SolveModPTest, ExactlyOneArmHoldsAgainstExhaustiveSearch) {
  std::mt19937 rng(11);
  for (long p : {2L, 3L, 5L}) {
    std::size_t max_n = p == 2 ? 12 : (p == 3 ? 7 : 5);
    for (int t = 0; t < 60; ++t) {
      std::size_t n = 1 + rng() % max_n;
      std::size_t m = 1 + rng() % (n + 2);
      std::vector<std::vector<long>> a(m, std::vector<long>(n));
      std::vector<long> b(m);
      for (auto& row : a)
        for (auto& v : row) v = (rng() % 3 == 0) ? static_cast<long>(rng() % p) : 0;
      for (auto& v : b) v = static_cast<long>(rng() % p);
      auto r = solve_mod_p(a, b, p);
      bool solvable = exhaustive_solvable(a, b, p, n);
      if (auto* sol = std::get_if<ModPSolution>(&r)) {
        EXPECT_TRUE(solvable);
        for (std::size_t i = 0; i < m; ++i) {
          long s = 0;
          for (std::size_t j = 0; j < n; ++j) s += a[i][j] * sol->x[j];
          EXPECT_EQ(((s - b[i]) % p + p) % p, 0);
        }
      } else {
        EXPECT_FALSE(solvable);
        const auto& alpha = std::get<ModPCertificate>(r).alpha;
        long rhs = 0;
        for (std::size_t i = 0; i < m; ++i) rhs += alpha[i] * b[i];
        EXPECT_NE(rhs % p, 0);
        for (std::size_t j = 0; j < n; ++j) {
          long s = 0;
          for (std::size_t i = 0; i < m; ++i) s += alpha[i] * a[i][j];
          EXPECT_EQ(s % p, 0);
        }
      }
    }
  }
}

}  // namespace
}  // namespace cpsp
