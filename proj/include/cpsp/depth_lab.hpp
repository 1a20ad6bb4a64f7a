// Depth lower-bound machinery: good halfspaces, the crux selection, the
// Prover-Adversary game and the two adversary walks over semantic CP DAGs.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cpsp/cp.hpp"
#include "cpsp/instances.hpp"

namespace cpsp {

// h contains the all-1/2 point (over all of its coordinates).
bool is_good(const LinIneq& h);

// Fixes exactly the coordinates in I so that their XOR is b and h restricted
// stays good.  Throws when |I| < 2 or h is not good.
Restriction consistent_restriction(const LinIneq& h, const std::vector<std::size_t>& I, int b);

// v orthogonal to w1 and w2 with every coordinate except free[0], free[1]
// in {-1, 1} and those two in [-1, 1].
struct TwoFacePoint {
  RatVec v;
  std::size_t free[2] = {0, 0};
};
TwoFacePoint orthogonal_2face_vector(const IntVec& w1, const IntVec& w2);

struct CruxChoice {
  int child = 0;  // 0 or 1
  Restriction rho;
};

// H good and H & {0,1}^n inside H1 | H2.  Returns a child and a restriction
// fixing at most two coordinates under which that child is good.  Throws
// when the cover turns out to fail.
CruxChoice crux_select(const LinIneq& h, const LinIneq& h1, const LinIneq& h2);

// Prover-Adversary game on f.  States are partial assignments encoded in
// base 3 (digit 2 = free).
class ProverAdversaryGame {
 public:
  static constexpr std::uint8_t kInfinite = 255;
  static constexpr std::size_t kMaxVars = 14;

  explicit ProverAdversaryGame(const Cnf& f, std::size_t max_vars = kMaxVars);

  // Rounds the Prover needs from rho; kInfinite if rho extends to a model.
  std::uint8_t value(const Restriction& rho) const;
  std::uint8_t depth() const { return value(Restriction(f_.num_vars)); }
  // The Adversary's reply when queried on a free variable: the value
  // maximizing side, 0 on ties.
  int answer(const Restriction& rho, std::size_t var) const;
  bool falsifies_clause(const Restriction& rho) const;
  const Cnf& cnf() const { return f_; }

 private:
  std::uint8_t solve(std::uint64_t state) const;
  bool falsified(std::uint64_t state) const;
  std::uint64_t encode(const Restriction& rho) const;

  Cnf f_;
  std::vector<std::uint64_t> pow3_;
  mutable std::vector<std::uint8_t> memo_;  // 254 = not yet computed
};

// Exact game value; ProverAdversaryGame::kInfinite for satisfiable f.
// Throws BudgetExceeded above max_vars variables.
unsigned res_depth(const Cnf& f, std::size_t max_vars = ProverAdversaryGame::kMaxVars);

struct WalkResult {
  std::vector<std::size_t> path;  // node ids from the root
  std::vector<std::string> transcript;
  std::size_t invariant_checks = 0;
  std::string stop_reason;
  std::size_t length() const { return path.empty() ? 0 : path.size() - 1; }
};

// Walk over a DAG for the XOR4 lift of f (block i = variables 4i..4i+3),
// answering block queries with the optimal Adversary of f.  lifted is the
// CNF the DAG refutes.  Stops when the Adversary is forced to falsify a
// clause of f; throws on any invariant violation.
WalkResult lifted_walk(const ScpDag& d, const Cnf& lifted, const Cnf& f);

// Walk over a DAG refuting to_cnf(sys), sys over F_2 an (r, s+3)-boundary
// expander.  Halts when the budget k (initially r) reaches 0; throws on any
// invariant violation.
WalkResult expander_walk(const ScpDag& d, const LinSystemFq& sys, std::size_t r, std::size_t s);

// sys with each variable z_i replaced by x_{4i} + ... + x_{4i+3} (q = 2).
LinSystemFq xor4_lift(const LinSystemFq& sys);

}  // namespace cpsp
