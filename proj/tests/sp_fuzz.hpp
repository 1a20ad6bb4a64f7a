// Random SP refutations for property tests: random queries near the top of
// the tree, then branching on a fractional coordinate of the LP witness.
#pragma once

#include <random>

#include "cpsp/lp.hpp"
#include "cpsp/sp.hpp"

namespace cpsp::fuzz {

struct SpFuzzConfig {
  long coef = 2;               // |query coefficients| <= coef
  std::size_t random_depth = 3;  // levels that use random queries
};

inline std::size_t grow(SpProof& p, std::mt19937& rng, const SpFuzzConfig& cfg,
                        std::vector<LinIneq>& path) {
  Polytope here = p.axioms;
  for (const auto& e : path) here.add(e);
  LpResult feas = lp_feasibility(here);
  if (feas.infeasible()) return p.add_leaf(leaf_certificate(p.axioms, path));
  const std::size_t n = p.dim();
  IntVec a(n);
  Integer b;
  bool chosen = false;
  if (path.size() < cfg.random_depth) {
    for (int attempt = 0; attempt < 5 && !chosen; ++attempt) {
      for (auto& v : a) v = static_cast<long>(rng() % (2 * cfg.coef + 1)) - cfg.coef;
      if (is_zero(a)) continue;
      LpResult lo = lp_optimum(here, a, Direction::Minimize);
      LpResult hi = lp_optimum(here, a, Direction::Maximize);
      if (!lo.optimal() || !hi.optimal()) continue;
      Integer from = floor_div(lo.value) + 1, to = ceil_div(hi.value);
      if (from > to) continue;
      Integer span = to - from + 1;
      b = from + Integer(static_cast<unsigned long>(rng() % span.get_ui()));
      chosen = true;
    }
  }
  if (!chosen) {
    const RatVec& x = lp_optimum(here, zeros(n), Direction::Minimize).witness;
    std::size_t i = 0;
    while (i < n && is_integral(x[i])) ++i;
    if (i == n) throw Error("fuzz: integral LP point; the polytope is not integer-free");
    a = unit(n, i);
    b = floor_div(x[i]) + 1;
  }
  path.push_back(left_edge(a, b));
  std::size_t l = grow(p, rng, cfg, path);
  path.back() = right_edge(a, b);
  std::size_t r = grow(p, rng, cfg, path);
  path.pop_back();
  return p.add_query(a, b, l, r);
}

// axioms must have no integral point and keep every coordinate bounded.
inline SpProof random_sp(const Polytope& axioms, std::mt19937& rng, const SpFuzzConfig& cfg = {}) {
  SpProof p;
  p.axioms = axioms;
  std::vector<LinIneq> path;
  p.root = grow(p, rng, cfg, path);
  return p;
}

}  // namespace cpsp::fuzz
