#include <random>

#include "cpsp/lp.hpp"
#include "cpsp/refuter.hpp"
#include "cpsp/translator.hpp"
#include "gtest/gtest.h"
#include "lift_fuzz.hpp"
#include "oracles.hpp"
#include "sp_fuzz.hpp"

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

// Unit square cut down to the diamond around (1/2, 1/2); no integral point.
Polytope diamond() {
  Polytope p = unit_box(2);
  p.add(LinIneq(iv({2, 2}), 1));
  p.add(LinIneq::at_most(iv({2, 2}), 3));
  p.add(LinIneq(iv({2, -2}), -1));
  p.add(LinIneq::at_most(iv({2, -2}), 1));
  return p;
}

LinSystemFq odd_complete(std::size_t n) {
  Graph g = complete_graph(n);
  g.labels[0] = 1;
  return tseitin(g);
}

std::vector<std::pair<IntVec, Integer>> queries_preorder(const SpProof& p) {
  std::vector<std::pair<IntVec, Integer>> out;
  std::vector<std::size_t> stack{p.root};
  while (!stack.empty()) {
    const SpNode& q = p.nodes[stack.back()];
    stack.pop_back();
    if (q.leaf) continue;
    out.emplace_back(q.a, q.b);
    stack.push_back(q.right);
    stack.push_back(q.left);
  }
  return out;
}

TEST(SchrijverLiftTest, WholePolytopeFaceLeavesCutAlone) {
  Polytope p(2, {LinIneq(iv({2, 0}), 1), LinIneq::at_most(iv({1, 0}), 1), LinIneq(iv({0, 1}), 0),
                 LinIneq::at_most(iv({0, 1}), 0)});
  FaceCut cut{iv({1, 0}), Rational(1, 2), {Rational(1, 2), 0, 0, 0, 0, 0}};
  LinIneq out = schrijver_lift(p, iv({0, 1}), 0, cut);
  EXPECT_EQ(out, LinIneq(iv({1, 0}), 1));
}

TEST(SchrijverLiftTest, UnitSquareByHand) {
  // On the face x2 = 0, 2x1 + 2x2 >= 1 reads x1 >= 1/2; the dual puts 1/2
  // on that row and 1 on -x2 >= 0, so lambda = 1.
  Polytope p = unit_box(2);
  p.add(LinIneq(iv({2, 2}), 1));
  FaceCut cut{iv({1, 0}), Rational(1, 2), {0, 0, 0, 0, Rational(1, 2), 0, 1}};
  LinIneq out = schrijver_lift(p, iv({0, 1}), 0, cut);
  EXPECT_EQ(out, LinIneq(iv({1, 1}), 1));

  // The LP's own dual gives a cut with the same face behaviour.
  Polytope face = p;
  face.add(LinIneq(iv({0, 1}), 0));
  face.add(LinIneq(iv({0, -1}), 0));
  LpResult r = lp_optimum(face, iv({1, 0}), Direction::Minimize);
  ASSERT_TRUE(r.optimal());
  fuzz::LiftCase c{p, iv({0, 1}), 0, {iv({1, 0}), r.value, r.dual}};
  EXPECT_TRUE(fuzz::lift_properties_hold(c, schrijver_lift(p, c.a, c.b, c.cut)));
}

TEST(SchrijverLiftTest, RejectsBadInput) {
  Polytope p = unit_box(2);
  FaceCut wrong{iv({1, 0}), 1, {1, 0, 0, 0, 0, 0}};  // x1 >= 0 does not give x1 >= 1
  EXPECT_THROW(schrijver_lift(p, iv({0, 1}), 0, wrong), Error);
  FaceCut ok{iv({1, 0}), 0, {1, 0, 0, 0, 0, 0}};
  EXPECT_THROW(schrijver_lift(p, iv({0, 1}), 1, ok), Error);  // x2 >= 1 is not valid
}

TEST(SchrijverLiftTest, FuzzedTriplesAgreeWithOracle) {
  std::mt19937 rng(31);
  int done = 0;
  while (done < 150) {
    auto c = fuzz::random_lift_case(rng);
    if (!c) continue;
    LinIneq out = schrijver_lift(c->p, c->a, c->b, c->cut);
    EXPECT_TRUE(fuzz::lift_properties_hold(*c, out));
    // The lift only moves along a.
    IntVec diff = add(out.coeffs, negate(c->cut.c));
    for (std::size_t i = 0; i < diff.size(); ++i)
      for (std::size_t j = 0; j < diff.size(); ++j) EXPECT_EQ(diff[i] * c->a[j], diff[j] * c->a[i]);
    ++done;
  }
}

TEST(FacelikeToPathlikeTest, DiamondToyProof) {
  // Root x1 (face x1 = 0 on the left), then x2 on each side.
  SpProof p;
  p.axioms = diamond();
  std::vector<LinIneq> path{left_edge(iv({1, 0}), 1), left_edge(iv({0, 1}), 1)};
  auto leaf = [&] { return p.add_leaf(leaf_certificate(p.axioms, path)); };
  std::size_t ll = leaf();
  path[1] = right_edge(iv({0, 1}), 1);
  std::size_t lr = leaf();
  std::size_t l = p.add_query(iv({0, 1}), 1, ll, lr);
  path[0] = right_edge(iv({1, 0}), 1);
  path[1] = left_edge(iv({0, 1}), 1);
  std::size_t rl = leaf();
  path[1] = right_edge(iv({0, 1}), 1);
  std::size_t rr = leaf();
  std::size_t r = p.add_query(iv({0, 1}), 1, rl, rr);
  p.root = p.add_query(iv({1, 0}), 1, l, r);
  ASSERT_TRUE(verify_sp(p));
  ASSERT_TRUE(all_facelike(p));
  ASSERT_FALSE(all_pathlike(p));

  SpProof q = facelike_to_pathlike(p);
  EXPECT_TRUE(verify_sp(q));
  EXPECT_TRUE(all_pathlike(q));
  EXPECT_EQ(stats(q).size, 3u);
  EXPECT_EQ(stats(q).depth, 3u);
}

TEST(FacelikeToPathlikeTest, PathlikeInputUnchanged) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    Cnf f = random_kcnf(4, 20, 2, seed);
    auto res = oracle::tree_resolution(f);
    if (!res) continue;
    SpProof p = cp_to_pathlike(resolution_to_cp(f, *res));
    ASSERT_TRUE(all_pathlike(p));
    SpProof q = facelike_to_pathlike(p);
    EXPECT_TRUE(verify_sp(q));
    EXPECT_EQ(queries_preorder(q), queries_preorder(p));
  }
}

TEST(FacelikeToPathlikeTest, RefuterOutputOnTriangle) {
  Graph g = complete_graph(3);
  g.labels = {1, 1, 1};
  SpProof p = refute_sp(tseitin(g));
  SpProof q = facelike_to_pathlike(p);
  EXPECT_TRUE(verify_sp(q));
  EXPECT_TRUE(all_pathlike(q));
  EXPECT_LE(stats(q).size, stats(p).size);
}

TEST(FacelikeToPathlikeTest, RejectsGeneralQuery) {
  SpProof p;
  p.axioms = unit_box(2);
  p.axioms.ineqs[1] = LinIneq::at_most(unit(2, 0), 3);
  p.axioms.add(LinIneq(iv({2, 0}), 1));
  p.axioms.add(LinIneq::at_most(iv({2, 0}), 1));
  // Segment x1 = 1/2, 0 <= x2 <= 3; x1 + x2 ranges over [1/2, 7/2].
  p.axioms.ineqs[3] = LinIneq::at_most(unit(2, 1), 3);
  std::size_t l = p.add_leaf({});
  std::size_t r = p.add_leaf({});
  p.root = p.add_query(iv({1, 1}), 2, l, r);
  ASSERT_EQ(classify_query(p.axioms, iv({1, 1}), 2).kind, QueryKind::General);
  EXPECT_THROW(facelike_to_pathlike(p), Error);
}

TEST(PathlikeToCpTest, SingleCutProof) {
  SpProof p;
  p.axioms = Polytope(1, {LinIneq(iv({2}), 1), LinIneq::at_most(iv({1}), 0)});
  std::size_t l = p.add_leaf({{SpLeafTerm::Axiom, 0, 1}, {SpLeafTerm::Edge, 0, 2}});
  std::size_t r = p.add_leaf({{SpLeafTerm::Axiom, 1, 1}, {SpLeafTerm::Edge, 0, 1}});
  p.root = p.add_query(iv({1}), 1, l, r);
  CpProof cp = pathlike_to_cp(p);
  EXPECT_TRUE(verify_cp(cp, true));
  EXPECT_EQ(cp.lines.size(), 3u);
}

TEST(PathlikeToCpTest, CutThenClose) {
  // 2x = 1 has a rational point only; the query (x <= 0, x >= 1) is pathlike
  // after the cut x >= 1 is derived.
  SpProof p;
  p.axioms = Polytope(1, {LinIneq(iv({2}), 1), LinIneq::at_most(iv({2}), 1)});
  SpProof q = facelike_to_pathlike([&] {
    SpProof s;
    s.axioms = p.axioms;
    std::size_t l = s.add_leaf(leaf_certificate(s.axioms, {left_edge(iv({1}), 1)}));
    std::size_t r = s.add_leaf(leaf_certificate(s.axioms, {right_edge(iv({1}), 1)}));
    s.root = s.add_query(iv({1}), 1, l, r);
    return s;
  }());
  CpProof cp = pathlike_to_cp(q);
  EXPECT_TRUE(verify_cp(cp, true));
}

CpProof five_line_proof() {
  Polytope ax(1, {LinIneq(iv({2}), 1), LinIneq::at_most(iv({2}), 1)});
  CpBuilder b(ax);
  std::size_t a0 = b.axiom(0);
  std::size_t d0 = b.divide(a0, 2);  // x >= 1
  std::size_t a1 = b.axiom(1);
  std::size_t d1 = b.divide(a1, 2);  // -x >= 0
  b.lin_comb({{d0, 1}, {d1, 1}});
  return b.take();
}

TEST(PathlikeToCpTest, RoundTripThroughPathlike) {
  CpProof cp = five_line_proof();
  ASSERT_TRUE(verify_cp(cp, true));
  ASSERT_EQ(cp.lines.size(), 5u);
  SpProof path = cp_to_pathlike(cp);
  EXPECT_TRUE(verify_sp(path));
  EXPECT_TRUE(all_pathlike(path));
  const std::size_t queries = stats(path).size;
  EXPECT_LE(queries, cp.lines.size());
  CpProof back = pathlike_to_cp(path);
  EXPECT_TRUE(verify_cp(back, true));
  const std::size_t n = cp.dim(), m = cp.axioms.size();
  EXPECT_LE(back.lines.size(), (n + m + 2) * queries + m + 2);
}

TEST(PathlikeToCpTest, ResolutionProofsRoundTrip) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Cnf f = random_kcnf(4, 20, 2, seed);
    auto res = oracle::tree_resolution(f);
    if (!res) continue;
    CpProof cp = resolution_to_cp(f, *res);
    SpProof path = cp_to_pathlike(cp);
    ASSERT_TRUE(verify_sp(path));
    ASSERT_TRUE(all_pathlike(path));
    CpProof back = pathlike_to_cp(path);
    EXPECT_TRUE(verify_cp(back, true));
    const std::size_t n = cp.dim(), m = cp.axioms.size();
    EXPECT_LE(back.lines.size(), (n + m + 2) * stats(path).size + m + 2);
  }
}

TEST(PathlikeToCpTest, RejectsInvalidCp) {
  CpProof cp = five_line_proof();
  cp.lines[1].ineq.rhs = 2;
  EXPECT_THROW(cp_to_pathlike(cp), Error);
}

TEST(SpStarTest, FacelikeInputKeepsItsQueries) {
  SpProof p = refute_sp(odd_complete(4));
  ASSERT_TRUE(all_facelike(p));
  SpProof q = sp_star_to_facelike(p, 2, Rational(p.dim()));
  EXPECT_TRUE(verify_sp(q));
  EXPECT_EQ(queries_preorder(q), queries_preorder(p));
}

TEST(SpStarTest, GeneralQueryOnTheSquareBecomesAChain) {
  // Root (3x1 <= 1, 3x1 >= 2) splits the diamond into two non-faces.
  std::mt19937 rng(5);
  SpProof p;
  p.axioms = diamond();
  fuzz::SpFuzzConfig cfg;
  cfg.random_depth = 0;
  std::vector<LinIneq> path{left_edge(iv({3, 0}), 2)};
  std::size_t l = fuzz::grow(p, rng, cfg, path);
  path[0] = right_edge(iv({3, 0}), 2);
  std::size_t r = fuzz::grow(p, rng, cfg, path);
  p.root = p.add_query(iv({3, 0}), 2, l, r);
  ASSERT_TRUE(verify_sp(p));
  ASSERT_EQ(classify_query(p.axioms, iv({3, 0}), 2).kind, QueryKind::General);

  SpProof q = sp_star_to_facelike(p, 3, 2);
  EXPECT_TRUE(verify_sp(q));
  EXPECT_TRUE(all_facelike(q));
  // Chain of queries in direction 3x1 from the top: 3x1 in [0, 3].
  std::size_t chain = 0;
  for (const auto& [a, b] : queries_preorder(q))
    if (a == iv({3, 0})) ++chain;
  EXPECT_GE(chain, 2u);
  EXPECT_LE(chain, 6u);  // c * sqrt(2) * sqrt(2)
  EXPECT_LE(Integer(leaf_count(q)), facelike_size_bound(leaf_count(p), 3, 2, 2));
}

TEST(SpStarTest, FuzzedProofsBecomeFacelikeWithinBound) {
  std::mt19937 rng(37);
  int done = 0;
  for (std::uint64_t seed = 0; done < 25; ++seed) {
    const std::size_t n = 2 + seed % 3;
    Cnf f = random_kcnf(n, 4 * n, std::min<std::size_t>(n, 2 + seed % 2), seed);
    Polytope ax = to_polytope(f);
    if (oracle::has_integral_point_in_cube(ax)) continue;
    fuzz::SpFuzzConfig cfg;
    SpProof p = fuzz::random_sp(ax, rng, cfg);
    ASSERT_TRUE(verify_sp(p));
    SpProof q = sp_star_to_facelike(p, cfg.coef, Rational(n));
    ASSERT_TRUE(verify_sp(q)) << seed;
    EXPECT_TRUE(all_facelike(q)) << seed;
    EXPECT_LE(Integer(leaf_count(q)), facelike_size_bound(leaf_count(p), cfg.coef, n, n)) << seed;
    ++done;
  }
}

TEST(SpStarTest, RejectsLargeCoefficients) {
  SpProof p = refute_sp(odd_complete(4));
  EXPECT_THROW(sp_star_to_facelike(p, 1, Rational(p.dim())), Error);
}

TEST(CompileTest, TriangleAllOnes) {
  Graph g = complete_graph(3);
  g.labels = {1, 1, 1};
  CompileResult r = compile(tseitin(g));
  EXPECT_TRUE(verify_cp(r.proof, true));
  EXPECT_TRUE(r.proof.ends_in_contradiction());
  ASSERT_EQ(r.stages.size(), 3u);
  EXPECT_EQ(r.stages.front().stage, "refute_sp");
  EXPECT_EQ(r.stages.back().stage, "pathlike_to_cp");
}

TEST(CompileTest, OddK4IsLongAndNarrow) {
  CompileResult r = compile(odd_complete(4));
  EXPECT_TRUE(verify_cp(r.proof, true));
  ProofStats s = stats(r.proof);
  EXPECT_GE(4 * s.depth, s.size);
}

TEST(CompileTest, PrimeFieldThree) {
  LinSystemFq sys;
  sys.n = 2;
  sys.q = 3;
  sys.d = 2;
  sys.equations = {{{0, 1}, {1, 1}, 1}, {{0, 1}, {1, 1}, 0}};
  EXPECT_TRUE(verify_cp(compile(sys).proof, true));
}

TEST(CompileTest, SatisfiableRejected) {
  EXPECT_THROW(compile(tseitin(complete_graph(3))), Error);
}

}  // namespace
}  // namespace cpsp
