// Random (polytope, face, face cut) triples for the lift property tests.
#pragma once

#include <optional>
#include <random>

#include "cpsp/lp.hpp"
#include "cpsp/translator.hpp"
#include "oracles.hpp"

namespace cpsp::fuzz {

struct LiftCase {
  Polytope p;
  IntVec a;
  Integer b;
  FaceCut cut;
};

// n in [1, max_n], coefficients in [-coef, coef].  The face is cut out by a
// random direction whose minimum happens to be integral, else by a box row.
inline std::optional<LiftCase> random_lift_case(std::mt19937& rng, std::size_t max_n = 4, int coef = 5) {
  const std::size_t n = 1 + rng() % max_n;
  LiftCase c;
  c.p = oracle::random_polytope(rng, n, 1 + rng() % 3, coef, 3);
  if (lp_feasibility(c.p).infeasible()) return std::nullopt;
  std::uniform_int_distribution<int> cd(-coef, coef);
  c.a = IntVec(n);
  for (auto& v : c.a) v = cd(rng);
  LpResult m = is_zero(c.a) ? LpResult{} : lp_optimum(c.p, c.a, Direction::Minimize);
  if (m.optimal() && is_integral(m.value)) {
    c.b = m.value.get_num();
  } else {
    c.a = unit(n, rng() % n);
    m = lp_optimum(c.p, c.a, Direction::Minimize);
    if (!is_integral(m.value)) return std::nullopt;
    c.b = m.value.get_num();
  }
  Polytope face = c.p;
  face.add(LinIneq(c.a, c.b));
  face.add(LinIneq(negate(c.a), -c.b));
  c.cut.c = IntVec(n);
  for (auto& v : c.cut.c) v = cd(rng);
  if (is_zero(c.cut.c)) return std::nullopt;
  LpResult f = lp_optimum(face, c.cut.c, Direction::Minimize);
  if (!f.optimal()) return std::nullopt;
  c.cut.d = f.value;
  c.cut.dual = f.dual;
  return c;
}

// Independent re-check by Fourier-Motzkin of the two lift properties.
inline bool lift_properties_hold(const LiftCase& c, const LinIneq& lifted) {
  const Integer d = ceil_div(c.cut.d);
  // lifted = (c + lambda a).x >= ceil(d) + lambda b; unrounded rhs is
  // d + lambda b.
  const Rational unrounded = lifted.rhs - Rational(d) + c.cut.d;
  oracle::FmResult v = oracle::fm_minimum(c.p, lifted.coeffs);
  if (v.unbounded || (!v.infeasible && v.value < unrounded)) return false;
  Polytope pf = c.p;
  pf.add(lifted);
  pf.add(LinIneq(c.a, c.b));
  pf.add(LinIneq(negate(c.a), -c.b));
  oracle::FmResult inc = oracle::fm_minimum(pf, c.cut.c);
  if (inc.infeasible) return true;
  return !inc.unbounded && inc.value >= Rational(d);
}

}  // namespace cpsp::fuzz
