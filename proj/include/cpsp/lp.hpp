// Exact rational linear programming and the small linear-algebra kernels the
// proof builders need (Farkas checks, null-space vectors, elimination mod p).
#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "cpsp/linear.hpp"

namespace cpsp {

enum class LpStatus { Infeasible, Unbounded, Optimal };
enum class Direction { Minimize, Maximize };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;  // Optimal only
  RatVec witness;  // Optimal only: a point of the polytope attaining value
  // Nonnegative multipliers over the polytope's rows.
  //  Optimal, Minimize: sum dual_i * row_i == (objective >= value)
  //  Optimal, Maximize: sum dual_i * row_i == (-objective >= -value)
  //  Infeasible:        sum dual_i * row_i == (0 >= 1)
  RatVec dual;

  bool optimal() const { return status == LpStatus::Optimal; }
  bool infeasible() const { return status == LpStatus::Infeasible; }
};

// Exact two-phase revised simplex (Bland's rule) run on the dual
//   max rhs.y  s.t.  A^T y = objective, y >= 0
// of  min objective.x  s.t.  A x >= rhs.  Every result is re-verified exactly
// before it is returned.
LpResult lp_optimum(const Polytope& p, const IntVec& objective, Direction dir);

// Shorthand for an emptiness test; on Infeasible, dual certifies 0 >= 1.
LpResult lp_feasibility(const Polytope& p);

// True iff multipliers are nonnegative and sum_i multipliers_i * ineqs_i has
// exactly target's coefficients and a right-hand side >= target.rhs.
bool farkas_check(const std::vector<LinIneq>& ineqs, const RatVec& multipliers,
                  const LinIneq& target);

// Weighted sum of inequalities with rational weights; coefficients stay
// rational so callers can compare against an integer target.
struct RationalCombination {
  RatVec coeffs;
  Rational rhs;
};
RationalCombination combine(const std::vector<LinIneq>& ineqs, const RatVec& multipliers,
                            std::size_t dim);

// Nonzero rational vector orthogonal to every row, or nullopt when the rows
// span R^n.  Rows must share dimension n.
std::optional<RatVec> nullspace_vector(const std::vector<RatVec>& rows, std::size_t n);
std::optional<RatVec> nullspace_vector(const std::vector<IntVec>& rows, std::size_t n);

// A x = b over F_p.
struct ModPSolution {
  std::vector<long> x;
};
struct ModPCertificate {
  std::vector<long> alpha;  // alpha^T A == 0, alpha^T b != 0 (mod p)
};
using ModPResult = std::variant<ModPSolution, ModPCertificate>;

bool is_prime(long p);
ModPResult solve_mod_p(const std::vector<std::vector<long>>& a, const std::vector<long>& b,
                       long p);

}  // namespace cpsp
