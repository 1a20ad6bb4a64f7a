// Instance families: CNFs, linear systems over prime fields, Tseitin graphs,
// random k-XOR / k-CNF, XOR-4 lifting, boundary expansion and restrictions.
//
// Variables are 0-based in memory.  CNF literals use the DIMACS convention
// (+v / -v for 1-based v) so files and in-memory clauses read the same.
#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <utility>
#include <vector>

#include "cpsp/linear.hpp"

namespace cpsp {

using Clause = std::vector<int>;

struct Cnf {
  std::size_t num_vars = 0;
  std::vector<Clause> clauses;

  // Throws on out-of-range literals, literal 0, or a clause containing both
  // v and -v.
  void validate() const;
  bool satisfied_by(const std::vector<std::uint8_t>& x) const;
};

struct Equation {
  std::vector<std::size_t> vars;  // distinct, ascending
  std::vector<long> coeffs;       // in [1, q)
  long rhs = 0;                   // in [0, q)

  std::size_t width() const { return vars.size(); }
};

struct LinSystemFq {
  std::size_t n = 0;
  long q = 2;
  std::size_t d = 0;  // width bound
  std::vector<Equation> equations;

  std::size_t m() const { return equations.size(); }
  void validate() const;
  bool satisfied_by(const std::vector<long>& x) const;
  // Dense m x n coefficient matrix and rhs, as consumed by solve_mod_p.
  std::vector<std::vector<long>> matrix() const;
  std::vector<long> rhs() const;
};

struct Graph {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<int> labels;  // one per vertex, 0 or 1

  void validate() const;  // simple, duplicate-free, labels sized n
  bool connected() const;
};

Graph complete_graph(std::size_t n);
Graph cycle_graph(std::size_t n);

// Edge e of g becomes variable e; vertex v becomes equation v.
LinSystemFq tseitin(const Graph& g);

// Bits per F_q variable: 1 for q = 2, otherwise ceil(log2 q).  Variable i owns
// boolean variables i*B .. i*B+B-1, bit j carrying weight 2^j.
std::size_t bits_per_var(long q);
Cnf to_cnf(const LinSystemFq& sys);

// Clause rows first (in clause order), then for each variable the pair
// x_i >= 0, -x_i >= -1.
Polytope to_polytope(const Cnf& f);

LinSystemFq random_kxor(std::size_t n, std::size_t m, std::size_t k, std::uint64_t seed);
Cnf random_kcnf(std::size_t n, std::size_t m, std::size_t k, std::uint64_t seed);
LinSystemFq cnf_to_kxor(const Cnf& f, std::size_t k);

// Variable z_i becomes the XOR of lifted variables 4i..4i+3.
Cnf xor4_lift(const Cnf& f);

// |delta(W)|: variables occurring in exactly one equation of W.
std::size_t boundary_size(const LinSystemFq& sys, const std::vector<std::size_t>& subset);

struct ExpansionResult {
  std::vector<std::size_t> worst_set;
  Rational ratio;
};

// Default subset budget; the CPSP_ENUM_BUDGET environment variable overrides.
inline constexpr std::uint64_t kDefaultEnumBudget = 5'000'000;
std::uint64_t enumeration_budget();

// Exact minimum of |delta(W)|/|W| over nonempty W with |W| <= r.  Ties go to
// the lexicographically smallest sorted index list.  Throws BudgetExceeded
// when the number of subsets exceeds budget (0 means enumeration_budget()).
ExpansionResult boundary_expansion(const LinSystemFq& sys, std::size_t r,
                                   std::uint64_t budget = 0);

class Restriction {
 public:
  static constexpr std::int8_t kFree = -1;

  Restriction() = default;
  explicit Restriction(std::size_t n) : val_(n, kFree) {}

  std::size_t size() const { return val_.size(); }
  bool is_free(std::size_t i) const { return val_.at(i) == kFree; }
  int value(std::size_t i) const { return val_.at(i); }
  void fix(std::size_t i, int b);
  void unfix(std::size_t i) { val_.at(i) = kFree; }
  std::vector<std::size_t> free_vars() const;
  std::vector<std::size_t> fixed_vars() const;

  bool operator==(const Restriction&) const = default;

 private:
  std::vector<std::int8_t> val_;
};

// Halfspace over the free coordinates (ascending), fixed coordinates
// substituted into the right-hand side.
LinIneq apply_restriction(const LinIneq& h, const Restriction& rho);

// Constraints that become empty are either dropped (satisfied) or listed in
// falsified; survivors keep the original variable numbering and record the
// index of the constraint they came from.
struct RestrictedSystem {
  LinSystemFq system;
  std::vector<std::size_t> origin;
  std::vector<std::size_t> falsified;
};
RestrictedSystem apply_restriction(const LinSystemFq& sys, const Restriction& rho);

struct RestrictedCnf {
  Cnf cnf;
  std::vector<std::size_t> origin;
  std::vector<std::size_t> falsified;
};
RestrictedCnf apply_restriction(const Cnf& f, const Restriction& rho);

// Text formats.
Cnf read_dimacs(std::istream& in);
void write_dimacs(std::ostream& out, const Cnf& f);
LinSystemFq read_lin(std::istream& in);
void write_lin(std::ostream& out, const LinSystemFq& sys);
Graph read_graph(std::istream& in);
void write_graph(std::ostream& out, const Graph& g);
// One row per line: n coefficients, ">=", rational right-hand side.
Polytope read_poly(std::istream& in);
void write_poly(std::ostream& out, const Polytope& p);

}  // namespace cpsp
