// Stabbing Planes refutations of unsatisfiable linear systems over F_q, by
// recursive halving of a certificate's support.
#pragma once

#include <string>
#include <vector>

#include "cpsp/instances.hpp"
#include "cpsp/sp.hpp"

namespace cpsp {

// How the integer value of a linear form is queried.  Ascending: thresholds
// in increasing order, every query facelike.  Balanced: binary search over
// the same thresholds, logarithmic depth but not facelike in general.
enum class ChainMode { Ascending, Balanced };

struct RefuteOptions {
  ChainMode mode = ChainMode::Ascending;
  std::vector<std::string>* transcript = nullptr;  // one line per round
};

// Certificate alpha (alpha^T A = 0, alpha^T b != 0 mod q) whose support is
// inclusion-minimal.  Throws with a witness when the system is satisfiable.
std::vector<long> minimal_certificate(const LinSystemFq& sys);

// Integer linear form of equation i over the boolean encoding of to_cnf.
IntVec equation_form(const LinSystemFq& sys, std::size_t i);

// Axioms of the result are to_polytope(to_cnf(sys)).
SpProof refute_sp(const LinSystemFq& sys, const RefuteOptions& opts = {});

struct RefuteStats {
  std::size_t size = 0;
  std::size_t depth = 0;
};
// Measured on the balanced-chain construction.
RefuteStats refute_sp_stats(const LinSystemFq& sys);

// Per-instance ceiling on the query count of refute_sp:
//   C^(2R) * 2^(d*B + 1)
// with C = 2 + sum of |coefficients| of the root form, R = ceil(log2 |I|) + 1
// rounds and B bits per variable.
Integer refute_size_bound(const LinSystemFq& sys);

}  // namespace cpsp
