#include "cpsp/translator.hpp"

#include <cmath>
#include <functional>

#include "cpsp/lp.hpp"
#include "cpsp/refuter.hpp"

namespace cpsp {

namespace {

// A node polytope carried alongside the edges that produced it.
struct Frame {
  Polytope cur;
  std::vector<LinIneq> path;

  void push(const LinIneq& e) {
    cur.add(e);
    path.push_back(e);
  }
  void pop() {
    cur.ineqs.pop_back();
    path.pop_back();
  }
  bool empty() const { return lp_feasibility(cur).infeasible(); }
};

struct Range {
  Rational lo, hi;
};

Range range_of(const Polytope& p, const IntVec& a) {
  LpResult lo = lp_optimum(p, a, Direction::Minimize);
  LpResult hi = lp_optimum(p, a, Direction::Maximize);
  if (!lo.optimal() || !hi.optimal()) throw Error("query direction is unbounded over its node");
  return {lo.value, hi.value};
}

// One step of a pathlike proof: query (a, b) and which child continues.
struct PathStep {
  IntVec a;
  Integer b;
  bool right_survives;

  LinIneq survivor() const { return right_survives ? right_edge(a, b) : left_edge(a, b); }
  LinIneq cut_off() const { return right_survives ? left_edge(a, b) : right_edge(a, b); }
};

SpProof path_to_proof(const Polytope& axioms, const std::vector<PathStep>& steps) {
  SpProof out;
  out.axioms = axioms;
  std::vector<LinIneq> path;
  for (const auto& s : steps) path.push_back(s.survivor());
  std::size_t below = out.add_leaf(leaf_certificate(axioms, path));
  for (std::size_t k = steps.size(); k-- > 0;) {
    path.resize(k);
    path.push_back(steps[k].cut_off());
    std::size_t dead = out.add_leaf(leaf_certificate(axioms, path));
    const PathStep& s = steps[k];
    below = s.right_survives ? out.add_query(s.a, s.b, dead, below) : out.add_query(s.a, s.b, below, dead);
  }
  out.root = below;
  return out;
}

// The lift itself; fa.x >= fb must be valid for p.  Only the dual
// certificate is checked here.
LinIneq lift_cut(const Polytope& p, const IntVec& a, const Integer& b, const FaceCut& cut) {
  const std::size_t n = p.dim;
  if (a.size() != n || cut.c.size() != n) throw Error("schrijver_lift: dimension mismatch");
  if (cut.dual.size() != p.size() + 2) throw Error("schrijver_lift: dual certificate has the wrong length");
  std::vector<LinIneq> rows = p.ineqs;
  rows.push_back(LinIneq(a, b));
  rows.push_back(LinIneq(negate(a), -b));
  if (!farkas_check(rows, cut.dual, LinIneq(cut.c, cut.d)))
    throw Error("schrijver_lift: dual certificate inconsistent");
  const Integer lambda = ceil_div(cut.dual.back());
  return LinIneq(add(cut.c, scale(a, lambda)), ceil_div(cut.d) + lambda * b);
}

class Pathifier {
 public:
  explicit Pathifier(const SpProof& p) : p_(p) {}

  // Steps refuting `start` by following the subtree at id; the polytope
  // after the last step is empty.
  std::vector<PathStep> run(const Polytope& start, std::size_t id) {
    std::vector<PathStep> steps;
    Polytope cur = start;
    auto take = [&](PathStep s) {
      cur.add(s.survivor());
      steps.push_back(std::move(s));
    };
    while (true) {
      const SpNode& q = p_.nodes.at(id);
      // The minimum LP doubles as the emptiness test.
      LpResult lo = q.leaf ? lp_feasibility(cur) : lp_optimum(cur, q.a, Direction::Minimize);
      if (lo.infeasible()) break;
      if (q.leaf) throw Error("facelike_to_pathlike: leaf reached with a nonempty polytope");
      LpResult hi = lp_optimum(cur, q.a, Direction::Maximize);
      if (!lo.optimal() || !hi.optimal()) throw Error("query direction is unbounded over its node");
      const Range r{lo.value, hi.value};
      if (r.lo > Rational(q.b - 1)) {
        take({q.a, q.b, true});
        id = q.right;
      } else if (r.hi < Rational(q.b)) {
        take({q.a, q.b, false});
        id = q.left;
      } else if (r.lo == Rational(q.b - 1)) {
        lift_face(cur, steps, q.a, q.b - 1, q.left);
        take({q.a, q.b, true});
        id = q.right;
      } else if (r.hi == Rational(q.b)) {
        lift_face(cur, steps, negate(q.a), -q.b, q.right);
        take({q.a, q.b, false});
        id = q.left;
      } else {
        throw Error("facelike_to_pathlike: query is not facelike at its node");
      }
    }
    return steps;
  }

 private:
  const SpProof& p_;

  // fa.x >= fb is valid on cur.  Refutes the face recursively, then lifts
  // each face cut to cur until the face is gone.
  void lift_face(Polytope& cur, std::vector<PathStep>& steps, const IntVec& fa, const Integer& fb,
                 std::size_t sub) {
    Polytope face = cur;
    face.add(LinIneq(fa, fb));
    face.add(LinIneq(negate(fa), -fb));
    for (const PathStep& s : run(face, sub)) {
      Polytope here = cur;
      here.add(LinIneq(fa, fb));
      here.add(LinIneq(negate(fa), -fb));
      const LinIneq keep = s.survivor();
      LpResult r = lp_optimum(here, keep.coeffs, Direction::Minimize);
      if (r.infeasible()) break;
      if (!r.optimal()) throw Error("facelike_to_pathlike: face cut is unbounded");
      LinIneq lifted = lift_cut(cur, fa, fb, FaceCut{keep.coeffs, r.value, r.dual});
      if (!is_integral(lifted.rhs)) throw Error("facelike_to_pathlike: internal error: fractional cut");
      PathStep step{lifted.coeffs, lifted.rhs.get_num(), true};
      cur.add(step.survivor());
      steps.push_back(std::move(step));
    }
  }
};

}  // namespace

std::size_t leaf_count(const SpProof& p, std::size_t id) {
  std::size_t leaves = 0;
  std::vector<std::size_t> stack{id};
  while (!stack.empty()) {
    const SpNode& q = p.nodes.at(stack.back());
    stack.pop_back();
    if (q.leaf) {
      ++leaves;
    } else {
      stack.push_back(q.left);
      stack.push_back(q.right);
    }
  }
  return leaves;
}

Integer facelike_size_bound(std::size_t s, const Integer& c, const Rational& diam2, std::size_t n) {
  const long double k = c.get_d() * std::sqrt(diam2.get_d() * static_cast<long double>(n));
  const long double v = static_cast<long double>(s) * std::pow(k, std::log2(static_cast<long double>(s)));
  Integer out;
  mpz_set_d(out.get_mpz_t(), static_cast<double>(std::ceil(v)));
  return out;
}

SpProof sp_star_to_facelike(const SpProof& p, const Integer& c, const Rational& diam2) {
  for (const auto& q : p.nodes)
    if (!q.leaf)
      for (const auto& v : q.a)
        if (abs(v) > c) throw Error("sp_star_to_facelike: coefficient exceeds the bound c");
  if (diam2 < 0) throw Error("sp_star_to_facelike: negative squared diameter");
  sp_diameter_bound(p.axioms);  // throws when unbounded

  SpProof out;
  out.axioms = p.axioms;
  Frame f{p.axioms, {}};
  std::function<std::size_t(std::size_t)> convert;
  auto leaf = [&] { return out.add_leaf(leaf_certificate(out.axioms, f.path)); };
  auto query = [&](const IntVec& a, const Integer& b, const std::function<std::size_t()>& left,
                   const std::function<std::size_t()>& right) {
    f.push(left_edge(a, b));
    std::size_t l = left();
    f.pop();
    f.push(right_edge(a, b));
    std::size_t r = right();
    f.pop();
    return out.add_query(a, b, l, r);
  };
  convert = [&](std::size_t id) -> std::size_t {
    if (f.empty()) return leaf();
    const SpNode& q = p.nodes.at(id);
    if (q.leaf) return leaf();  // throws: the input leaf did not close this node
    Range r = range_of(f.cur, q.a);
    const bool facelike = r.lo > Rational(q.b - 1) || r.hi < Rational(q.b) ||
                          r.lo >= Rational(q.b - 1) || r.hi <= Rational(q.b);
    if (facelike)
      return query(q.a, q.b, [&] { return convert(q.left); }, [&] { return convert(q.right); });
    if (leaf_count(p, q.left) <= leaf_count(p, q.right)) {
      // Unit slabs from the bottom: left children are faces a.x = b0 + i.
      const Integer b0 = floor_div(r.lo);
      std::function<std::size_t(Integer)> up = [&](Integer beta) -> std::size_t {
        return query(q.a, beta, [&] { return convert(q.left); },
                     [&] { return beta == q.b ? convert(q.right) : up(beta + 1); });
      };
      return up(b0 + 1);
    }
    const Integer b1 = ceil_div(r.hi);
    std::function<std::size_t(Integer)> down = [&](Integer beta) -> std::size_t {
      return query(q.a, beta, [&] { return beta == q.b ? convert(q.left) : down(beta - 1); },
                   [&] { return convert(q.right); });
    };
    return down(b1);
  };
  out.root = convert(p.root);
  return out;
}

LinIneq schrijver_lift(const Polytope& p, const IntVec& a, const Integer& b, const FaceCut& cut) {
  LinIneq out = lift_cut(p, a, b, cut);
  LpResult valid = lp_optimum(p, a, Direction::Minimize);
  if (valid.optimal() && valid.value < Rational(b))
    throw Error("schrijver_lift: a.x >= b is not valid for the polytope");
  const Integer lambda = ceil_div(cut.dual.back());
  const Integer d = ceil_div(cut.d);
  const IntVec& lifted = out.coeffs;

  // Valid for p before rounding.
  if (!valid.infeasible()) {
    LpResult m = lp_optimum(p, lifted, Direction::Minimize);
    if (!m.optimal() || m.value < cut.d + Rational(lambda * b))
      throw Error("schrijver_lift: post-check failed, lifted inequality not valid before rounding");
  }
  // p' & F inside F' = F & {c.x >= ceil(d)}.
  Polytope pf = p;
  pf.add(out);
  pf.add(LinIneq(a, b));
  pf.add(LinIneq(negate(a), -b));
  LpResult inc = lp_optimum(pf, cut.c, Direction::Minimize);
  if (!inc.infeasible() && (!inc.optimal() || inc.value < Rational(d)))
    throw Error("schrijver_lift: post-check failed, lifted cut does not imply the face cut");
  return out;
}

SpProof facelike_to_pathlike(const SpProof& p) {
  Pathifier walk(p);
  return path_to_proof(p.axioms, walk.run(p.axioms, p.root));
}

CpProof pathlike_to_cp(const SpProof& p) {
  CpBuilder b(p.axioms);
  Polytope cur = p.axioms;
  std::vector<RowRef> rows;
  for (std::size_t i = 0; i < p.axioms.size(); ++i) rows.push_back({RowRef::Axiom, i});
  std::size_t id = p.root;
  while (!lp_feasibility(cur).infeasible()) {
    const SpNode& q = p.nodes.at(id);
    if (q.leaf) throw Error("pathlike_to_cp: leaf reached with a nonempty polytope");
    const bool left_leaf = p.nodes.at(q.left).leaf, right_leaf = p.nodes.at(q.right).leaf;
    if (!left_leaf && !right_leaf) throw Error("pathlike_to_cp: query with two internal children");
    const bool left_dead = lp_feasibility(cur.with(left_edge(q.a, q.b))).infeasible();
    const bool go_right = left_leaf && !right_leaf ? true : right_leaf && !left_leaf ? false : left_dead;
    const LinIneq keep = go_right ? right_edge(q.a, q.b) : left_edge(q.a, q.b);
    const LinIneq drop = go_right ? left_edge(q.a, q.b) : right_edge(q.a, q.b);
    if ((go_right && !left_dead) || (!go_right && !lp_feasibility(cur.with(drop)).infeasible()))
      throw Error("pathlike_to_cp: query is not pathlike");
    id = go_right ? q.right : q.left;
    if (is_zero(keep.coeffs)) continue;
    CgCut cut = cg_cut_derive(b, cur, rows, keep.coeffs);
    cur.add(cut.cut);
    rows.push_back({RowRef::Line, cut.line});
  }
  derive_contradiction(b, cur, rows);
  return b.take();
}

SpProof cp_to_pathlike(const CpProof& p) {
  if (Verdict v = verify_cp(p, true); !v) throw Error("cp_to_pathlike: invalid refutation: " + v.reason);
  std::vector<PathStep> steps;
  Polytope cur = p.axioms;
  for (const auto& line : p.lines) {
    if (lp_feasibility(cur).infeasible()) break;
    if (!is_integral(line.ineq.rhs)) throw Error("cp_to_pathlike: fractional line");
    steps.push_back({line.ineq.coeffs, line.ineq.rhs.get_num(), true});
    cur.add(line.ineq);
  }
  return path_to_proof(p.axioms, steps);
}

CompileResult compile(const LinSystemFq& sys) {
  CompileResult res;
  auto report = [&](const char* stage, const ProofStats& s) {
    res.stages.push_back({stage, s.size, s.depth, s.max_coeff_bits});
  };
  auto check = [](const Verdict& v, const char* stage) {
    if (!v) throw Error(std::string("compile: ") + stage + " output failed verification: " + v.reason);
  };
  SpProof sp = refute_sp(sys);
  check(verify_sp(sp), "refute_sp");
  report("refute_sp", stats(sp));
  if (!all_facelike(sp)) {
    Integer c = 0;
    for (const auto& q : sp.nodes)
      for (const auto& v : q.a) c = std::max(c, Integer(abs(v)));
    sp = sp_star_to_facelike(sp, c, Rational(sp.dim()));
    check(verify_sp(sp), "sp_star_to_facelike");
    report("sp_star_to_facelike", stats(sp));
  }
  SpProof path = facelike_to_pathlike(sp);
  check(verify_sp(path), "facelike_to_pathlike");
  report("facelike_to_pathlike", stats(path));
  res.proof = pathlike_to_cp(path);
  check(verify_cp(res.proof, true), "pathlike_to_cp");
  report("pathlike_to_cp", stats(res.proof));
  return res;
}

}  // namespace cpsp
