// Syntactic Cutting Planes proofs (bottom-up line sequences) and semantic CP
// DAGs (top-down halfspaces of falsified points).
#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cpsp/instances.hpp"
#include "cpsp/linear.hpp"

namespace cpsp {

struct CpAxiom {
  std::size_t index;  // row of the axiom polytope
};
struct CpLinComb {
  std::vector<std::pair<std::size_t, Integer>> terms;  // (earlier line, lambda)
};
struct CpDivision {
  std::size_t line;
  Integer divisor;
};
using CpJustification = std::variant<CpAxiom, CpLinComb, CpDivision>;

struct CpLine {
  LinIneq ineq;
  CpJustification just;
};

struct CpProof {
  Polytope axioms;
  std::vector<CpLine> lines;

  std::size_t dim() const { return axioms.dim; }
  bool ends_in_contradiction() const {
    return !lines.empty() && lines.back().ineq.is_contradiction();
  }
};

// Shared verdict type for every verifier.  index is a line (CP), node (sCP)
// or pre-order node (SP) number, 0-based.
struct Verdict {
  bool valid = true;
  std::size_t index = 0;
  std::string reason;

  static Verdict ok() { return {}; }
  static Verdict fail(std::size_t i, std::string why) { return {false, i, std::move(why)}; }
  explicit operator bool() const { return valid; }
};

// Checks every line; with require_refutation the last line must be 0 >= 1.
// Reports the lowest failing line.
Verdict verify_cp(const CpProof& p, bool require_refutation = false);

// Appends lines to a proof, computing each line's inequality from its
// justification.  Axiom lines are materialized on first use.
class CpBuilder {
 public:
  explicit CpBuilder(Polytope axioms);

  std::size_t axiom(std::size_t k);
  std::size_t lin_comb(const std::vector<std::pair<std::size_t, Integer>>& terms);
  std::size_t divide(std::size_t line, const Integer& d);

  const LinIneq& ineq(std::size_t line) const { return proof_.lines.at(line).ineq; }
  const CpProof& proof() const { return proof_; }
  CpProof take() { return std::move(proof_); }

 private:
  CpProof proof_;
  std::vector<std::optional<std::size_t>> axiom_line_;
};

// Where a polytope row comes from inside a CpBuilder.
struct RowRef {
  enum Kind { Axiom, Line } kind;
  std::size_t index;
};

struct CgCut {
  LinIneq cut;
  std::size_t line;  // line of the cut in the builder
};

// Chvatal-Gomory cut in direction a over the rows of p: one LinComb line
// from the LP dual scaled to integers, then one Division line.  With
// L = min a.x over p and g = gcd(a), the cut is (a/g).x >= ceil(L/g).
// Throws if the minimum is not finite.
CgCut cg_cut_derive(CpBuilder& b, const Polytope& p, const std::vector<RowRef>& rows,
                    const IntVec& a);

// Standalone form: the fragment's axioms are p's rows.
std::pair<LinIneq, CpProof> cg_cut_derive(const Polytope& p, const IntVec& a);

// Closes an empty polytope: LinComb to 0 >= R, then Division by ceil(R) when
// R != 1.  Returns the final line.
std::size_t derive_contradiction(CpBuilder& b, const Polytope& p, const std::vector<RowRef>& rows);

// Top-down semantic CP DAG.  Node 0 is the root; children have larger
// indices.  A sink cites a 1-based clause index, or 0 when its halfspace is
// claimed to contain no boolean point at all (negated box axioms).
struct ScpNode {
  LinIneq h;  // the set of falsified points {x : h}
  std::vector<std::size_t> children;
  std::optional<std::size_t> sink;
};

struct ScpDag {
  std::size_t n = 0;
  std::vector<ScpNode> nodes;
};

inline constexpr std::size_t kScpMaxVars = 22;

// Exhaustive over {0,1}^n; throws BudgetExceeded when n > max_vars.
Verdict verify_scp(const ScpDag& d, const Cnf& f, std::size_t max_vars = kScpMaxVars);

// Resolution refutations: each step is an axiom (a 0-based clause of the
// CNF) or the resolvent of two earlier steps.  The pivot is inferred.
struct ResStep {
  Clause clause;
  std::optional<std::size_t> axiom;
  std::size_t left = 0, right = 0;
};
using ResProof = std::vector<ResStep>;

Verdict verify_resolution(const Cnf& f, const ResProof& r);
// Axioms of the result are to_polytope(f).
CpProof resolution_to_cp(const Cnf& f, const ResProof& r);

// Requires p.axioms == to_polytope(f) and a Valid refutation.  Only lines
// reachable from the final line are kept; LinComb lines with more than two
// antecedents become chains of partial sums.
ScpDag cp_to_scp(const CpProof& p, const Cnf& f);

// Decision tree over f: the node for a partial assignment rho is the set of
// boolean points extending rho.  Branches on the first free variable of the
// shortest clause not yet satisfied; stops at a falsified clause.
ScpDag decision_tree_scp(const Cnf& f);

struct ProofStats {
  std::size_t size = 0;
  std::size_t depth = 0;
  std::size_t max_coeff_bits = 0;
};
// size = line count; depth counts lines on the longest justification chain
// (an axiom line has depth 1).
ProofStats stats(const CpProof& p);
// size = node count; depth = longest root-to-node path in edges.
ProofStats stats(const ScpDag& d);

// Text formats; axioms are not part of the CP file and are supplied by the
// caller.
CpProof read_cp(std::istream& in, const Polytope& axioms);
void write_cp(std::ostream& out, const CpProof& p);
ScpDag read_scp(std::istream& in);
void write_scp(std::ostream& out, const ScpDag& d);

}  // namespace cpsp
