#include <cstdlib>
#include <map>
#include <random>
#include <sstream>

#include "cpsp/instances.hpp"
#include "cpsp/lp.hpp"
#include "gtest/gtest.h"

namespace cpsp {
namespace {

bool unsat_mod_p(const LinSystemFq& s) {
  return std::holds_alternative<ModPCertificate>(solve_mod_p(s.matrix(), s.rhs(), s.q));
}

std::vector<std::uint8_t> bits_of(unsigned long mask, std::size_t n) {
  std::vector<std::uint8_t> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> i) & 1;
  return x;
}

Graph labelled(Graph g, std::vector<int> labels) {
  g.labels = std::move(labels);
  return g;
}

TEST(TseitinTest, TriangleAllOnes) {
  auto s = tseitin(labelled(complete_graph(3), {1, 1, 1}));
  EXPECT_EQ(s.n, 3u);
  ASSERT_EQ(s.m(), 3u);
  for (const auto& e : s.equations) EXPECT_EQ(e.width(), 2u);
  EXPECT_TRUE(unsat_mod_p(s));
}

TEST(TseitinTest, K4OneLabel) {
  auto s = tseitin(labelled(complete_graph(4), {1, 0, 0, 0}));
  EXPECT_EQ(s.n, 6u);
  ASSERT_EQ(s.m(), 4u);
  for (const auto& e : s.equations) EXPECT_EQ(e.width(), 3u);
  auto r = solve_mod_p(s.matrix(), s.rhs(), 2);
  ASSERT_TRUE(std::holds_alternative<ModPCertificate>(r));
  EXPECT_EQ(std::get<ModPCertificate>(r).alpha, (std::vector<long>{1, 1, 1, 1}));
}

TEST(TseitinTest, EvenCycleSatisfiable) {
  auto s = tseitin(cycle_graph(4));
  EXPECT_TRUE(s.satisfied_by(std::vector<long>(4, 0)));
  EXPECT_FALSE(unsat_mod_p(s));
}

TEST(TseitinTest, DisconnectedRejected) {
  Graph g;
  g.n = 4;
  g.edges = {{0, 1}, {2, 3}};
  g.labels = {0, 0, 0, 0};
  EXPECT_THROW(tseitin(g), Error);
}

TEST(TseitinTest, UnsatisfiableIffOddLabelSum) {
  std::mt19937 rng(5);
  int checked = 0;
  for (int t = 0; t < 400; ++t) {
    std::size_t n = 2 + rng() % 7;
    Graph g;
    g.n = n;
    // Random spanning tree plus extra edges keeps the graph connected.
    std::set<std::pair<std::size_t, std::size_t>> es;
    for (std::size_t v = 1; v < n; ++v) es.insert({rng() % v, v});
    for (std::size_t k = rng() % (n + 1); k > 0; --k) {
      std::size_t u = rng() % n, v = rng() % n;
      if (u != v) es.insert({std::min(u, v), std::max(u, v)});
    }
    g.edges.assign(es.begin(), es.end());
    int sum = 0;
    for (std::size_t v = 0; v < n; ++v) {
      g.labels.push_back(rng() % 2);
      sum += g.labels.back();
    }
    EXPECT_EQ(unsat_mod_p(tseitin(g)), sum % 2 == 1);
    ++checked;
  }
  EXPECT_EQ(checked, 400);
}

TEST(ToCnfTest, SingleXor) {
  LinSystemFq s{2, 2, 2, {{{0, 1}, {1, 1}, 1}}};
  Cnf f = to_cnf(s);
  ASSERT_EQ(f.clauses.size(), 2u);
  std::set<std::set<int>> got;
  for (auto& c : f.clauses) got.insert(std::set<int>(c.begin(), c.end()));
  EXPECT_EQ(got, (std::set<std::set<int>>{{1, 2}, {-1, -2}}));
}

TEST(ToCnfTest, K4OddHasSixteenWidthThreeClauses) {
  Cnf f = to_cnf(tseitin(labelled(complete_graph(4), {1, 0, 0, 0})));
  EXPECT_EQ(f.clauses.size(), 16u);
  for (const auto& c : f.clauses) EXPECT_EQ(c.size(), 3u);
}

TEST(ToCnfTest, TernaryUnitEquation) {
  LinSystemFq s{1, 3, 1, {{{0}, {1}, 2}}};
  Cnf f = to_cnf(s);
  EXPECT_EQ(f.num_vars, 2u);
  // Exactly one 2-bit pattern survives: b1 b0 = 1 0 (the value 2).
  std::vector<unsigned long> sat;
  for (unsigned long m = 0; m < 4; ++m)
    if (f.satisfied_by(bits_of(m, 2))) sat.push_back(m);
  EXPECT_EQ(sat, std::vector<unsigned long>{2});
  // The range clause forbidding value 3 is present.
  bool has_range = false;
  for (const auto& c : f.clauses)
    has_range |= std::set<int>(c.begin(), c.end()) == std::set<int>{-1, -2};
  EXPECT_TRUE(has_range);
}

TEST(ToCnfTest, ParityClausesExhaustive) {
  for (std::size_t w = 1; w <= 6; ++w) {
    for (long b = 0; b <= 1; ++b) {
      Equation e;
      for (std::size_t k = 0; k < w; ++k) e.vars.push_back(k), e.coeffs.push_back(1);
      e.rhs = b;
      Cnf f = to_cnf(LinSystemFq{w, 2, w, {e}});
      ASSERT_EQ(f.clauses.size(), 1u << (w - 1));
      for (const auto& c : f.clauses) {
        Cnf single{w, {c}};
        for (unsigned long m = 0; m < (1ul << w); ++m) {
          bool wrong_parity = (__builtin_popcountl(m) % 2) != b;
          // Each clause is falsified by exactly one point, a wrong-parity one.
          if (!single.satisfied_by(bits_of(m, w))) EXPECT_TRUE(wrong_parity);
        }
      }
      for (unsigned long m = 0; m < (1ul << w); ++m)
        EXPECT_EQ(f.satisfied_by(bits_of(m, w)), (__builtin_popcountl(m) % 2) == b);
    }
  }
}

TEST(ToCnfTest, TernaryEncodingMatchesSolutions) {
  std::mt19937 rng(9);
  for (int t = 0; t < 30; ++t) {
    LinSystemFq s;
    s.n = 3;
    s.q = 3;
    s.d = 2;
    for (int i = 0; i < 2; ++i) {
      Equation e;
      std::size_t a = rng() % 3, b = (a + 1 + rng() % 2) % 3;
      e.vars = {std::min(a, b), std::max(a, b)};
      e.coeffs = {1 + static_cast<long>(rng() % 2), 1 + static_cast<long>(rng() % 2)};
      e.rhs = rng() % 3;
      s.equations.push_back(e);
    }
    Cnf f = to_cnf(s);
    for (unsigned long m = 0; m < 64; ++m) {
      auto bits = bits_of(m, 6);
      std::vector<long> x(3);
      bool in_range = true;
      for (std::size_t i = 0; i < 3; ++i) {
        x[i] = bits[2 * i] + 2 * bits[2 * i + 1];
        in_range &= x[i] < 3;
      }
      EXPECT_EQ(f.satisfied_by(bits), in_range && s.satisfied_by(x));
    }
  }
}

TEST(ToPolytopeTest, ClauseRow) {
  Polytope p = to_polytope(Cnf{2, {{1, -2}}});
  ASSERT_EQ(p.size(), 5u);
  EXPECT_EQ(p.ineqs[0].coeffs, (IntVec{1, -1}));
  EXPECT_EQ(p.ineqs[0].rhs, 0);
}

TEST(ToPolytopeTest, EmptyIsCube) {
  Polytope p = to_polytope(Cnf{3, {}});
  EXPECT_EQ(p.size(), 6u);
  EXPECT_TRUE(p.contains(IntVec{1, 0, 1}));
  EXPECT_FALSE(p.contains(IntVec{2, 0, 0}));
}

TEST(ToPolytopeTest, TriangleHasNoIntegralPoints) {
  Polytope p = to_polytope(to_cnf(tseitin(labelled(complete_graph(3), {1, 1, 1}))));
  EXPECT_EQ(p.size(), 12u);
  for (unsigned long m = 0; m < 8; ++m) {
    IntVec x;
    for (auto b : bits_of(m, 3)) x.emplace_back(b);
    EXPECT_FALSE(p.contains(x));
  }
}

TEST(ToPolytopeTest, UnsatisfiableSystemsHaveNoIntegralPoints) {
  int unsat = 0;
  for (std::uint64_t seed = 1; unsat < 25 && seed < 500; ++seed) {
    std::size_t n = 4 + seed % 8;
    auto s = random_kxor(n, n + 2, 3, seed);
    if (!unsat_mod_p(s)) continue;
    ++unsat;
    Polytope p = to_polytope(to_cnf(s));
    for (unsigned long m = 0; m < (1ul << n); ++m) {
      IntVec x;
      for (auto b : bits_of(m, n)) x.emplace_back(b);
      ASSERT_FALSE(p.contains(x));
    }
  }
  EXPECT_EQ(unsat, 25);
}

TEST(RandomTest, Deterministic) {
  auto a = random_kxor(6, 12, 3, 1), b = random_kxor(6, 12, 3, 1);
  ASSERT_EQ(a.m(), 12u);
  for (std::size_t i = 0; i < a.m(); ++i) {
    EXPECT_EQ(a.equations[i].vars, b.equations[i].vars);
    EXPECT_EQ(a.equations[i].rhs, b.equations[i].rhs);
  }
  EXPECT_EQ(random_kcnf(8, 20, 3, 4).clauses, random_kcnf(8, 20, 3, 4).clauses);
  EXPECT_NE(random_kcnf(8, 20, 3, 4).clauses, random_kcnf(8, 20, 3, 5).clauses);
}

TEST(CnfToKxorTest, PositiveClause) {
  auto s = cnf_to_kxor(Cnf{2, {{1, 2}}}, 2);
  ASSERT_EQ(s.m(), 1u);
  EXPECT_EQ(s.equations[0].vars, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(s.equations[0].rhs, 1);
}

TEST(CnfToKxorTest, WidthMismatchRejected) {
  EXPECT_THROW(cnf_to_kxor(Cnf{3, {{1, 2}}}, 3), Error);
}

TEST(CnfToKxorTest, EncodingContainsOriginalClauses) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Cnf f = random_kcnf(7, 15, 3, seed);
    Cnf g = to_cnf(cnf_to_kxor(f, 3));
    std::set<std::set<int>> have;
    for (auto& c : g.clauses) have.insert(std::set<int>(c.begin(), c.end()));
    for (auto& c : f.clauses) EXPECT_TRUE(have.count(std::set<int>(c.begin(), c.end())));
  }
}

TEST(Xor4LiftTest, UnitClause) {
  Cnf g = xor4_lift(Cnf{1, {{1}}});
  EXPECT_EQ(g.num_vars, 4u);
  ASSERT_EQ(g.clauses.size(), 8u);
  for (const auto& c : g.clauses) EXPECT_EQ(c.size(), 4u);
  for (unsigned long m = 0; m < 16; ++m)
    EXPECT_EQ(g.satisfied_by(bits_of(m, 4)), __builtin_popcountl(m) % 2 == 1);
}

TEST(Xor4LiftTest, WidthTwo) {
  Cnf g = xor4_lift(Cnf{2, {{1, -2}}});
  ASSERT_EQ(g.clauses.size(), 64u);
  for (const auto& c : g.clauses) EXPECT_EQ(c.size(), 8u);
}

TEST(Xor4LiftTest, SemanticsExhaustive) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    std::size_t n = 1 + seed % 3;
    Cnf f = random_kcnf(n, 1 + seed % 4, 1 + seed % n, seed);
    Cnf g = xor4_lift(f);
    for (unsigned long m = 0; m < (1ul << (4 * n)); ++m) {
      std::vector<std::uint8_t> z(n);
      for (std::size_t i = 0; i < n; ++i) z[i] = __builtin_popcountl((m >> (4 * i)) & 15) % 2;
      ASSERT_EQ(g.satisfied_by(bits_of(m, 4 * n)), f.satisfied_by(z));
    }
  }
}

// Independent recount: bitmask enumeration and per-variable occurrence counts.
Rational brute_min_ratio(const LinSystemFq& s, std::size_t r) {
  Rational best = -1;
  for (unsigned long mask = 1; mask < (1ul << s.m()); ++mask) {
    std::size_t k = __builtin_popcountl(mask);
    if (k > r) continue;
    std::map<std::size_t, int> occ;
    for (std::size_t i = 0; i < s.m(); ++i)
      if (mask >> i & 1)
        for (auto v : s.equations[i].vars) ++occ[v];
    long boundary = 0;
    for (auto [v, c] : occ) boundary += (c == 1);
    Rational ratio = Rational(boundary) / static_cast<long>(k);
    if (best < 0 || ratio < best) best = ratio;
  }
  return best;
}

TEST(BoundaryExpansionTest, K4SingleVertex) {
  auto s = tseitin(labelled(complete_graph(4), {1, 0, 0, 0}));
  EXPECT_EQ(boundary_size(s, {0}), 3u);
  auto r = boundary_expansion(s, 1);
  EXPECT_EQ(r.ratio, 3);
  EXPECT_EQ(r.worst_set, std::vector<std::size_t>{0});
}

TEST(BoundaryExpansionTest, K6Pairs) {
  auto s = tseitin(labelled(complete_graph(6), {1, 0, 0, 0, 0, 0}));
  auto r = boundary_expansion(s, 2);
  EXPECT_EQ(r.ratio, 4);
  EXPECT_EQ(r.worst_set, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(boundary_size(s, r.worst_set), 8u);
}

TEST(BoundaryExpansionTest, DisjointSupports) {
  LinSystemFq s{6, 2, 3, {{{0}, {1}, 0}, {{1, 2}, {1, 1}, 0}, {{3, 4, 5}, {1, 1, 1}, 1}}};
  EXPECT_EQ(boundary_expansion(s, 3).ratio, 1);
}

TEST(BoundaryExpansionTest, AgreesWithRecount) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    std::size_t n = 4 + seed % 7, m = 3 + seed % 8;
    auto s = random_kxor(n, m, std::min<std::size_t>(3, n), seed);
    std::size_t r = 1 + seed % m;
    EXPECT_EQ(boundary_expansion(s, r).ratio, brute_min_ratio(s, r)) << seed;
  }
}

TEST(BoundaryExpansionTest, BudgetExceeded) {
  auto s = random_kxor(30, 30, 3, 1);
  EXPECT_THROW(boundary_expansion(s, 15, 1000), BudgetExceeded);
  setenv("CPSP_ENUM_BUDGET", "10", 1);
  EXPECT_THROW(boundary_expansion(s, 1), BudgetExceeded);
  setenv("CPSP_ENUM_BUDGET", "30", 1);
  EXPECT_NO_THROW(boundary_expansion(s, 1));
  unsetenv("CPSP_ENUM_BUDGET");
}

TEST(RestrictionTest, Halfspace) {
  Restriction rho(2);
  rho.fix(0, 1);
  LinIneq h = apply_restriction(LinIneq(IntVec{1, 1}, 1), rho);
  EXPECT_EQ(h.coeffs, IntVec{1});
  EXPECT_EQ(h.rhs, 0);
}

TEST(RestrictionTest, Equation) {
  Restriction rho(2);
  rho.fix(0, 0);
  auto r = apply_restriction(LinSystemFq{2, 2, 2, {{{0, 1}, {1, 1}, 1}}}, rho);
  ASSERT_EQ(r.system.m(), 1u);
  EXPECT_EQ(r.system.equations[0].vars, std::vector<std::size_t>{1});
  EXPECT_EQ(r.system.equations[0].rhs, 1);
  EXPECT_TRUE(r.falsified.empty());
  rho.fix(1, 0);
  r = apply_restriction(LinSystemFq{2, 2, 2, {{{0, 1}, {1, 1}, 1}}}, rho);
  EXPECT_EQ(r.falsified, std::vector<std::size_t>{0});
}

TEST(RestrictionTest, ClauseFalsified) {
  Restriction rho(2);
  rho.fix(0, 0);
  rho.fix(1, 0);
  auto r = apply_restriction(Cnf{2, {{1, 2}, {-1}}}, rho);
  EXPECT_EQ(r.falsified, std::vector<std::size_t>{0});
  EXPECT_TRUE(r.cnf.clauses.empty());
}

TEST(FormatTest, RoundTrips) {
  auto s = random_kxor(7, 9, 3, 2);
  std::stringstream a;
  write_lin(a, s);
  auto s2 = read_lin(a);
  ASSERT_EQ(s2.m(), s.m());
  for (std::size_t i = 0; i < s.m(); ++i) EXPECT_EQ(s2.equations[i].vars, s.equations[i].vars);

  Cnf f = random_kcnf(5, 7, 2, 3);
  std::stringstream b;
  write_dimacs(b, f);
  EXPECT_EQ(read_dimacs(b).clauses, f.clauses);

  Graph g = labelled(complete_graph(4), {1, 0, 0, 1});
  std::stringstream c;
  write_graph(c, g);
  Graph g2 = read_graph(c);
  EXPECT_EQ(g2.edges, g.edges);
  EXPECT_EQ(g2.labels, g.labels);
}

TEST(FormatTest, PolytopeRoundTrip) {
  Polytope p(2);
  p.add(LinIneq({3, -1}, Rational(5, 2)));
  p.add(LinIneq({0, 1}, Rational(-4)));
  std::stringstream a;
  write_poly(a, p);
  const std::string text = a.str();
  Polytope q = read_poly(a);
  EXPECT_EQ(q.ineqs, p.ineqs);
  std::stringstream b;
  write_poly(b, q);
  EXPECT_EQ(b.str(), text);
  std::stringstream bad("p poly 2 1\n1 2 3\n");
  EXPECT_THROW(read_poly(bad), Error);
}

TEST(FormatTest, MalformedInputsRejected) {
  std::stringstream a("p cnf 2 1\n1 3 0\n");
  EXPECT_THROW(read_dimacs(a), Error);
  std::stringstream b("p cnf 2 2\n1 2 0\n");
  EXPECT_THROW(read_dimacs(b), Error);
  std::stringstream c("p lin 2 1 4 2\n1 1 1 2 = 1\n");
  EXPECT_THROW(read_lin(c), Error);
  std::stringstream d("p lin 2 1 2 1\n1 1 1 2 = 1\n");
  EXPECT_THROW(read_lin(d), Error);
  std::stringstream e("p graph 3 2\n1 2\n1 2\n");
  EXPECT_THROW(read_graph(e), Error);
  std::stringstream ok("c comment\np lin 3 1 3 2\n2 3 1 1 = 5\n");
  auto s = read_lin(ok);
  EXPECT_EQ(s.equations[0].vars, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(s.equations[0].coeffs, (std::vector<long>{1, 2}));
  EXPECT_EQ(s.equations[0].rhs, 2);
}

}  // namespace
}  // namespace cpsp
