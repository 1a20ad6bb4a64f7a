// Compilation SP* -> facelike SP -> pathlike SP -> CP, and the embedding of
// CP back into pathlike SP.
#pragma once

#include <string>
#include <vector>

#include "cpsp/cp.hpp"
#include "cpsp/instances.hpp"
#include "cpsp/sp.hpp"

namespace cpsp {

// Leaf count of the subtree rooted at id.
std::size_t leaf_count(const SpProof& p, std::size_t id);
inline std::size_t leaf_count(const SpProof& p) { return leaf_count(p, p.root); }

// s * (c * sqrt(diam2 * n))^(log2 s), rounded up; s is a leaf count.
Integer facelike_size_bound(std::size_t s, const Integer& c, const Rational& diam2, std::size_t n);

// Every General query is replaced by a chain of unit-step queries in its
// direction, expanding the side with fewer leaves (left on ties).
// Throws when a coefficient exceeds c in absolute value or the axiom
// polytope is unbounded.  diam2 only feeds the size bound check callers make.
SpProof sp_star_to_facelike(const SpProof& p, const Integer& c, const Rational& diam2);

// c.x >= d holds on the face F = p & {a.x = b}, certified by dual: one
// nonnegative multiplier per row of p, then one for a.x >= b, then one for
// -a.x >= -b.
struct FaceCut {
  IntVec c;
  Rational d;
  RatVec dual;
};

// With lambda = ceil(dual on -a.x >= -b), returns
//   (c + lambda a).x >= ceil(d) + lambda b,
// a CG cut for p whose intersection with {a.x = b} implies c.x >= ceil(d).
// a.x >= b must be valid for p.  Both properties are re-checked by LP and
// a failure throws.
LinIneq schrijver_lift(const Polytope& p, const IntVec& a, const Integer& b, const FaceCut& cut);

// Requires every query to be Pathlike or Facelike at its node.  Each input
// query yields at most one output query.
SpProof facelike_to_pathlike(const SpProof& p);

// Requires a pathlike proof; each surviving side becomes a CG cut, then the
// emptied polytope is closed with 0 >= 1.
CpProof pathlike_to_cp(const SpProof& p);

// Each line a.x >= b of a valid refutation becomes the query (a, b) whose
// left side is empty; stops once the polytope is empty.
SpProof cp_to_pathlike(const CpProof& p);

struct StageReport {
  std::string stage;
  std::size_t size = 0;
  std::size_t depth = 0;
  std::size_t max_coeff_bits = 0;
};

struct CompileResult {
  CpProof proof;
  std::vector<StageReport> stages;
};

// refute_sp, then sp_star_to_facelike only if some query is General, then
// facelike_to_pathlike and pathlike_to_cp.  Every stage is verified.
CompileResult compile(const LinSystemFq& sys);

}  // namespace cpsp
