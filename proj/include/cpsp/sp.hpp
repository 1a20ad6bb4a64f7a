// Stabbing Planes refutations: binary query trees whose leaves carry Farkas
// certificates over the axioms and the inequalities on their root path.
#pragma once

#include <istream>
#include <ostream>
#include <vector>

#include "cpsp/cp.hpp"
#include "cpsp/linear.hpp"

namespace cpsp {

struct SpLeafTerm {
  enum Source { Axiom, Edge } src;
  std::size_t index;  // axiom row, or position along the root path (0 = root edge)
  Rational lambda;
};

// Internal node (a, b): left edge a.x <= b - 1, right edge a.x >= b.
struct SpNode {
  bool leaf = false;
  IntVec a;
  Integer b;
  std::size_t left = 0, right = 0;
  std::vector<SpLeafTerm> cert;  // leaves only
};

struct SpProof {
  Polytope axioms;
  std::vector<SpNode> nodes;
  std::size_t root = 0;

  std::size_t dim() const { return axioms.dim; }
  std::size_t add_leaf(std::vector<SpLeafTerm> cert);
  std::size_t add_query(IntVec a, Integer b, std::size_t left, std::size_t right);
};

LinIneq left_edge(const IntVec& a, const Integer& b);   // -a.x >= 1 - b
LinIneq right_edge(const IntVec& a, const Integer& b);  // a.x >= b
inline LinIneq edge(const SpNode& q, bool right) {
  return right ? right_edge(q.a, q.b) : left_edge(q.a, q.b);
}

// Farkas certificate for axioms + edges being empty; throws if nonempty.
std::vector<SpLeafTerm> leaf_certificate(const Polytope& axioms, const std::vector<LinIneq>& edges);

// Verdict index is the node's position in pre-order.
Verdict verify_sp(const SpProof& p);

enum class QueryKind { Pathlike, Facelike, General };
enum class Side { Left, Right, None };
struct QueryClass {
  QueryKind kind;
  Side side;
};

// Pathlike(side) when that side misses p (left tested first), Facelike(side)
// when that side is the face {a.x = b-1} (resp. {a.x = b}), else General.
// Any query on an empty p is Pathlike(Left).
QueryClass classify_query(const Polytope& p, const IntVec& a, const Integer& b);

// Classification of every query against its node polytope, in pre-order.
std::vector<QueryClass> classify_all(const SpProof& p);
bool all_facelike(const SpProof& p);  // Pathlike or Facelike everywhere
bool all_pathlike(const SpProof& p);

// Sum over coordinates of (max x_i - min x_i)^2; 0 for an empty polytope.
// Throws when some coordinate is unbounded.
Rational sp_diameter_bound(const Polytope& p);

// size = query count; depth = tree height in edges.
ProofStats stats(const SpProof& p);

// Pre-order node list; axioms are supplied by the caller.
SpProof read_sp(std::istream& in, const Polytope& axioms);
void write_sp(std::ostream& out, const SpProof& p);

}  // namespace cpsp
