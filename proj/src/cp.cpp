#include "cpsp/cp.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "cpsp/lp.hpp"
#include "text_util.hpp"

namespace cpsp {

namespace {

LinIneq weighted_sum(const std::vector<const LinIneq*>& rows, const std::vector<Integer>& lambda,
                     std::size_t n) {
  LinIneq s(zeros(n), 0);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (lambda[k] == 0) continue;
    for (std::size_t i = 0; i < n; ++i) s.coeffs[i] += lambda[k] * rows[k]->coeffs[i];
    s.rhs += Rational(lambda[k]) * rows[k]->rhs;
  }
  return s;
}

std::optional<LinIneq> divided(const LinIneq& l, const Integer& d) {
  if (d <= 0) return std::nullopt;
  LinIneq out;
  for (const auto& c : l.coeffs) {
    if (!mpz_divisible_p(c.get_mpz_t(), d.get_mpz_t())) return std::nullopt;
    out.coeffs.push_back(c / d);
  }
  out.rhs = ceil_div(l.rhs / Rational(d));
  return out;
}

// Integer points violating c.x >= r, as a ">=" halfspace.
LinIneq negation(const LinIneq& l) { return LinIneq(negate(l.coeffs), 1 - ceil_div(l.rhs)); }

Integer denominator_lcm(const RatVec& y) {
  Integer D = 1;
  for (const auto& v : y)
    if (v != 0) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), v.get_den_mpz_t());
  return D;
}

std::size_t line_of(CpBuilder& b, const RowRef& r) {
  return r.kind == RowRef::Axiom ? b.axiom(r.index) : r.index;
}

std::vector<std::pair<std::size_t, Integer>> scaled_terms(CpBuilder& b,
                                                          const std::vector<RowRef>& rows,
                                                          const RatVec& y, const Integer& D) {
  std::vector<std::pair<std::size_t, Integer>> terms;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 0) continue;
    Rational s = y[i] * Rational(D);
    terms.emplace_back(line_of(b, rows.at(i)), s.get_num());
  }
  return terms;
}

std::set<int> as_set(const Clause& c) { return std::set<int>(c.begin(), c.end()); }

LinIneq clause_ineq(const std::set<int>& c, std::size_t n) {
  IntVec a = zeros(n);
  long neg = 0;
  for (int lit : c) {
    std::size_t v = static_cast<std::size_t>(std::abs(lit)) - 1;
    if (lit > 0) {
      a[v] += 1;
    } else {
      a[v] -= 1;
      ++neg;
    }
  }
  return LinIneq(a, 1 - neg);
}

std::string ineq_tokens(const LinIneq& l) {
  std::ostringstream os;
  for (const auto& c : l.coeffs) os << c << " ";
  os << ">= " << to_string(l.rhs);
  return os.str();
}

// Parses "c1 .. cn >= r ;" starting at t[pos]; returns position after ';'.
std::size_t parse_ineq(const detail::LineReader& r, const std::vector<std::string>& t,
                       std::size_t pos, std::size_t n, LinIneq& out) {
  if (t.size() < pos + n + 3) r.fail("truncated inequality");
  out.coeffs.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    if (!detail::parse_integer(t[pos + i], out.coeffs[i])) r.fail("bad coefficient '" + t[pos + i] + "'");
  pos += n;
  if (t[pos] != ">=") r.fail("expected '>='");
  if (!detail::parse_rational(t[pos + 1], out.rhs)) r.fail("bad right-hand side '" + t[pos + 1] + "'");
  if (t[pos + 2] != ";") r.fail("expected ';'");
  return pos + 3;
}

}  // namespace

Verdict verify_cp(const CpProof& p, bool require_refutation) {
  const std::size_t n = p.dim();
  for (std::size_t i = 0; i < p.lines.size(); ++i) {
    const CpLine& line = p.lines[i];
    if (line.ineq.dim() != n) return Verdict::fail(i, "dimension mismatch");
    if (auto* ax = std::get_if<CpAxiom>(&line.just)) {
      if (ax->index >= p.axioms.size()) return Verdict::fail(i, "axiom index out of range");
      if (!(line.ineq == p.axioms.ineqs[ax->index]))
        return Verdict::fail(i, "line does not match axiom " + std::to_string(ax->index + 1));
    } else if (auto* lc = std::get_if<CpLinComb>(&line.just)) {
      if (lc->terms.empty()) return Verdict::fail(i, "linear combination without antecedents");
      std::vector<const LinIneq*> rows;
      std::vector<Integer> lambda;
      for (const auto& [j, l] : lc->terms) {
        if (j >= i) return Verdict::fail(i, "reference to a later line");
        if (l < 0) return Verdict::fail(i, "negative multiplier");
        rows.push_back(&p.lines[j].ineq);
        lambda.push_back(l);
      }
      if (!(weighted_sum(rows, lambda, n) == line.ineq))
        return Verdict::fail(i, "line is not the stated linear combination");
    } else {
      const auto& dv = std::get<CpDivision>(line.just);
      if (dv.line >= i) return Verdict::fail(i, "reference to a later line");
      if (dv.divisor <= 0) return Verdict::fail(i, "divisor must be positive");
      auto q = divided(p.lines[dv.line].ineq, dv.divisor);
      if (!q) return Verdict::fail(i, "divisor does not divide every coefficient");
      if (!(*q == line.ineq)) return Verdict::fail(i, "line is not the rounded quotient");
    }
  }
  if (require_refutation && !p.ends_in_contradiction())
    return Verdict::fail(p.lines.empty() ? 0 : p.lines.size() - 1, "last line is not 0 >= 1");
  return Verdict::ok();
}

CpBuilder::CpBuilder(Polytope axioms) : axiom_line_(axioms.size()) {
  proof_.axioms = std::move(axioms);
}

std::size_t CpBuilder::axiom(std::size_t k) {
  if (k >= axiom_line_.size()) throw Error("cp builder: axiom index out of range");
  if (!axiom_line_[k]) {
    proof_.lines.push_back({proof_.axioms.ineqs[k], CpAxiom{k}});
    axiom_line_[k] = proof_.lines.size() - 1;
  }
  return *axiom_line_[k];
}

std::size_t CpBuilder::lin_comb(const std::vector<std::pair<std::size_t, Integer>>& terms) {
  if (terms.empty()) throw Error("cp builder: empty linear combination");
  std::vector<const LinIneq*> rows;
  std::vector<Integer> lambda;
  for (const auto& [j, l] : terms) {
    if (j >= proof_.lines.size() || l < 0) throw Error("cp builder: bad linear combination term");
    rows.push_back(&proof_.lines[j].ineq);
    lambda.push_back(l);
  }
  LinIneq s = weighted_sum(rows, lambda, proof_.dim());
  proof_.lines.push_back({std::move(s), CpLinComb{terms}});
  return proof_.lines.size() - 1;
}

std::size_t CpBuilder::divide(std::size_t line, const Integer& d) {
  auto q = divided(proof_.lines.at(line).ineq, d);
  if (!q) throw Error("cp builder: invalid division");
  proof_.lines.push_back({std::move(*q), CpDivision{line, d}});
  return proof_.lines.size() - 1;
}

CgCut cg_cut_derive(CpBuilder& b, const Polytope& p, const std::vector<RowRef>& rows,
                    const IntVec& a) {
  if (rows.size() != p.size()) throw Error("cg_cut_derive: row reference count mismatch");
  if (is_zero(a)) throw Error("cg_cut_derive: zero direction");
  LpResult r = lp_optimum(p, a, Direction::Minimize);
  if (r.status == LpStatus::Unbounded)
    throw Error("cg_cut_derive: objective unbounded below over the polytope");
  if (!r.optimal()) throw Error("cg_cut_derive: polytope is empty");
  const Integer D = denominator_lcm(r.dual);
  std::size_t sum = b.lin_comb(scaled_terms(b, rows, r.dual, D));
  std::size_t cut = b.divide(sum, D * gcd_of(a));
  return {b.ineq(cut), cut};
}

std::pair<LinIneq, CpProof> cg_cut_derive(const Polytope& p, const IntVec& a) {
  CpBuilder b(p);
  std::vector<RowRef> rows;
  for (std::size_t i = 0; i < p.size(); ++i) rows.push_back({RowRef::Axiom, i});
  CgCut c = cg_cut_derive(b, p, rows, a);
  return {c.cut, b.take()};
}

std::size_t derive_contradiction(CpBuilder& b, const Polytope& p, const std::vector<RowRef>& rows) {
  if (rows.size() != p.size()) throw Error("derive_contradiction: row reference count mismatch");
  LpResult r = lp_feasibility(p);
  if (!r.infeasible()) throw Error("derive_contradiction: polytope is not empty");
  const Integer D = denominator_lcm(r.dual);
  std::size_t line = b.lin_comb(scaled_terms(b, rows, r.dual, D));
  const Rational R = b.ineq(line).rhs;
  if (R != 1) line = b.divide(line, ceil_div(R));
  return line;
}

Verdict verify_scp(const ScpDag& d, const Cnf& f, std::size_t max_vars) {
  const std::size_t n = d.n, N = d.nodes.size();
  if (n != f.num_vars) return Verdict::fail(0, "dimension differs from the CNF");
  if (n > max_vars)
    throw BudgetExceeded("verify_scp: " + std::to_string(n) + " variables exceed the exhaustive budget " +
                         std::to_string(max_vars));
  if (N == 0) return Verdict::fail(0, "empty DAG");
  if (!d.nodes[0].h.is_universal()) return Verdict::fail(0, "root is not the whole space");
  std::vector<bool> has_parent(N, false);
  for (std::size_t v = 0; v < N; ++v) {
    const auto& node = d.nodes[v];
    if (node.h.dim() != n) return Verdict::fail(v, "dimension mismatch");
    if (node.children.size() > 2) return Verdict::fail(v, "fan-out exceeds 2");
    if (node.sink && !node.children.empty()) return Verdict::fail(v, "sink with children");
    if (node.sink && *node.sink > f.clauses.size()) return Verdict::fail(v, "clause index out of range");
    for (std::size_t c : node.children) {
      if (c <= v || c >= N) return Verdict::fail(v, "child index must be larger and in range");
      has_parent[c] = true;
    }
  }
  for (std::size_t v = 1; v < N; ++v)
    if (!has_parent[v]) return Verdict::fail(v, "second source");

  // Halfspace membership for integer points: a.x >= ceil(r).
  using Wide = __int128;
  bool fits = true;
  std::vector<Wide> thr(N);
  std::vector<std::vector<Wide>> col(n, std::vector<Wide>(N));
  const Integer cap = Integer(1) << 100;
  for (std::size_t v = 0; v < N && fits; ++v) {
    const auto& h = d.nodes[v].h;
    Integer total = 0;
    for (std::size_t i = 0; i < n; ++i) total += abs(h.coeffs[i]);
    Integer t = ceil_div(h.rhs);
    if (total > cap || abs(t) > cap) {
      fits = false;
      break;
    }
    auto wide = [](const Integer& z) {
      Integer m = abs(z);
      Wide w = 0;
      std::size_t bits = bit_length(m);
      for (std::size_t k = bits; k-- > 0;) w = (w << 1) | (mpz_tstbit(m.get_mpz_t(), k) ? 1 : 0);
      return z < 0 ? -w : w;
    };
    thr[v] = wide(t);
    for (std::size_t i = 0; i < n; ++i) col[i][v] = wide(h.coeffs[i]);
  }

  std::vector<std::uint32_t> pos_mask(f.clauses.size(), 0), neg_mask(f.clauses.size(), 0);
  for (std::size_t k = 0; k < f.clauses.size(); ++k)
    for (int lit : f.clauses[k]) {
      std::uint32_t bit = 1u << (std::abs(lit) - 1);
      (lit > 0 ? pos_mask : neg_mask)[k] |= bit;
    }

  std::size_t first_fail = N;
  std::string why;
  std::vector<Wide> sum(N, 0);
  std::vector<bool> in(N);
  auto check_point = [&](std::uint32_t x) {
    for (std::size_t v = 0; v < first_fail; ++v) {
      if (!in[v]) continue;
      const auto& node = d.nodes[v];
      if (node.sink) {
        std::size_t k = *node.sink;
        bool falsified = k > 0 && (x & pos_mask[k - 1]) == 0 && (~x & neg_mask[k - 1]) == 0;
        if (!falsified) {
          first_fail = v;
          why = k == 0 ? "sink contains a boolean point" : "sink clause is satisfied by a covered point";
          return;
        }
      } else {
        bool covered = false;
        for (std::size_t c : node.children) covered |= in[c];
        if (!covered) {
          first_fail = v;
          why = "boolean point not covered by the children";
          return;
        }
      }
    }
  };

  const std::uint64_t total = std::uint64_t{1} << n;
  if (fits) {
    for (std::size_t v = 0; v < N; ++v) in[v] = (0 >= thr[v]);
    check_point(0);
    std::uint32_t x = 0;
    for (std::uint64_t g = 1; g < total; ++g) {
      std::size_t bit = static_cast<std::size_t>(__builtin_ctzll(g));
      x ^= 1u << bit;
      const bool up = (x >> bit) & 1;
      const auto& c = col[bit];
      for (std::size_t v = 0; v < N; ++v) {
        sum[v] += up ? c[v] : -c[v];
        in[v] = sum[v] >= thr[v];
      }
      check_point(x);
    }
  } else {
    for (std::uint64_t x = 0; x < total; ++x) {
      IntVec pt(n);
      for (std::size_t i = 0; i < n; ++i) pt[i] = (x >> i) & 1;
      for (std::size_t v = 0; v < N; ++v) in[v] = d.nodes[v].h.satisfied_by(pt);
      check_point(static_cast<std::uint32_t>(x));
    }
  }
  if (first_fail < N) return Verdict::fail(first_fail, why);
  return Verdict::ok();
}

Verdict verify_resolution(const Cnf& f, const ResProof& r) {
  if (r.empty()) return Verdict::fail(0, "empty resolution proof");
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto& s = r[i];
    std::set<int> c = as_set(s.clause);
    if (s.axiom) {
      if (*s.axiom >= f.clauses.size()) return Verdict::fail(i, "axiom index out of range");
      if (as_set(f.clauses[*s.axiom]) != c) return Verdict::fail(i, "clause differs from axiom");
      continue;
    }
    if (s.left >= i || s.right >= i) return Verdict::fail(i, "reference to a later step");
    std::set<int> L = as_set(r[s.left].clause), R = as_set(r[s.right].clause);
    std::vector<int> pivots;
    for (int lit : L)
      if (R.count(-lit)) pivots.push_back(lit);
    if (pivots.size() != 1) return Verdict::fail(i, "antecedents must clash on exactly one variable");
    std::set<int> res;
    for (int lit : L)
      if (lit != pivots[0]) res.insert(lit);
    for (int lit : R)
      if (lit != -pivots[0]) res.insert(lit);
    if (res != c) return Verdict::fail(i, "clause is not the resolvent");
  }
  if (!r.back().clause.empty()) return Verdict::fail(r.size() - 1, "does not end in the empty clause");
  return Verdict::ok();
}

CpProof resolution_to_cp(const Cnf& f, const ResProof& r) {
  if (Verdict v = verify_resolution(f, r); !v)
    throw Error("resolution_to_cp: step " + std::to_string(v.index + 1) + ": " + v.reason);
  const std::size_t n = f.num_vars, m = f.clauses.size();
  CpBuilder b(to_polytope(f));
  std::vector<std::size_t> line(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto& s = r[i];
    if (s.axiom) {
      line[i] = b.axiom(*s.axiom);
      continue;
    }
    std::set<int> L = as_set(r[s.left].clause), R = as_set(r[s.right].clause);
    int pivot = 0;
    for (int lit : L)
      if (R.count(-lit)) pivot = lit;
    std::vector<std::pair<std::size_t, Integer>> terms{{line[s.left], 1}, {line[s.right], 1}};
    bool shared = false;
    std::vector<int> unique;
    for (int lit : L) {
      if (lit == pivot) continue;
      if (R.count(lit)) shared = true;
      else unique.push_back(lit);
    }
    for (int lit : R)
      if (lit != -pivot && !L.count(lit)) unique.push_back(lit);
    std::size_t out;
    if (!shared) {
      out = b.lin_comb(terms);
    } else {
      // Shared literals carry coefficient 2; lift the others to 2 with box
      // axioms and halve.
      for (int lit : unique) {
        std::size_t v = static_cast<std::size_t>(std::abs(lit)) - 1;
        terms.emplace_back(b.axiom(m + 2 * v + (lit > 0 ? 0 : 1)), 1);
      }
      out = b.divide(b.lin_comb(terms), 2);
    }
    if (!(b.ineq(out) == clause_ineq(as_set(s.clause), n)))
      throw Error("resolution_to_cp: internal error, derived line differs from the resolvent");
    line[i] = out;
  }
  return b.take();
}

ScpDag cp_to_scp(const CpProof& p, const Cnf& f) {
  Polytope expect = to_polytope(f);
  if (p.axioms.dim != expect.dim || p.axioms.ineqs != expect.ineqs)
    throw Error("cp_to_scp: proof axioms are not the CNF's polytope");
  if (Verdict v = verify_cp(p, true); !v)
    throw Error("cp_to_scp: invalid proof at line " + std::to_string(v.index + 1) + ": " + v.reason);
  const std::size_t L = p.lines.size(), m = f.clauses.size();

  std::vector<bool> reach(L, false);
  reach[L - 1] = true;
  for (std::size_t i = L; i-- > 0;) {
    if (!reach[i]) continue;
    const auto& j = p.lines[i].just;
    if (auto* lc = std::get_if<CpLinComb>(&j)) {
      for (const auto& [k, l] : lc->terms)
        if (l != 0) reach[k] = true;
    } else if (auto* dv = std::get_if<CpDivision>(&j)) {
      reach[dv->line] = true;
    }
  }

  // Built bottom-up (children first), renumbered at the end.
  std::vector<ScpNode> tmp;
  std::vector<std::size_t> node_of(L);
  for (std::size_t i = 0; i < L; ++i) {
    if (!reach[i]) continue;
    const CpLine& line = p.lines[i];
    ScpNode node{negation(line.ineq), {}, std::nullopt};
    if (auto* ax = std::get_if<CpAxiom>(&line.just)) {
      node.sink = ax->index < m ? ax->index + 1 : 0;
    } else if (auto* dv = std::get_if<CpDivision>(&line.just)) {
      node.children = {node_of[dv->line]};
    } else {
      std::map<std::size_t, Integer> merged;
      for (const auto& [k, l] : std::get<CpLinComb>(line.just).terms)
        if (l != 0) merged[k] += l;
      std::vector<std::pair<std::size_t, Integer>> terms(merged.begin(), merged.end());
      if (terms.size() <= 2) {
        for (const auto& t : terms) node.children.push_back(node_of[t.first]);
      } else {
        LinIneq acc(zeros(p.dim()), 0);
        std::size_t prev = 0;
        for (std::size_t k = 0; k + 1 < terms.size(); ++k) {
          const LinIneq& src = p.lines[terms[k].first].ineq;
          for (std::size_t c = 0; c < p.dim(); ++c) acc.coeffs[c] += terms[k].second * src.coeffs[c];
          acc.rhs += Rational(terms[k].second) * src.rhs;
          if (k == 0) continue;
          ScpNode partial{negation(acc), {}, std::nullopt};
          partial.children = k == 1 ? std::vector<std::size_t>{node_of[terms[0].first],
                                                               node_of[terms[1].first]}
                                    : std::vector<std::size_t>{prev, node_of[terms[k].first]};
          tmp.push_back(std::move(partial));
          prev = tmp.size() - 1;
        }
        node.children = {prev, node_of[terms.back().first]};
      }
    }
    tmp.push_back(std::move(node));
    node_of[i] = tmp.size() - 1;
  }

  ScpDag d;
  d.n = p.dim();
  const std::size_t T = tmp.size();
  d.nodes.resize(T);
  for (std::size_t v = 0; v < T; ++v) {
    ScpNode& dst = d.nodes[T - 1 - v];
    dst = std::move(tmp[v]);
    for (auto& c : dst.children) c = T - 1 - c;
    std::sort(dst.children.begin(), dst.children.end());
    dst.children.erase(std::unique(dst.children.begin(), dst.children.end()), dst.children.end());
  }
  return d;
}

ScpDag decision_tree_scp(const Cnf& f) {
  f.validate();
  const std::size_t n = f.num_vars;
  ScpDag d;
  d.n = n;
  std::vector<int> rho(n, -1);
  // Recursion depth is at most n.
  auto build = [&](auto&& self) -> std::size_t {
    IntVec a = zeros(n);
    long ones = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (rho[i] == 1) a[i] = 1, ++ones;
      else if (rho[i] == 0) a[i] = -1;
    }
    const std::size_t id = d.nodes.size();
    d.nodes.push_back({LinIneq(a, ones), {}, std::nullopt});
    std::size_t best = f.clauses.size(), best_free = 0;
    int branch = 0;
    for (std::size_t k = 0; k < f.clauses.size(); ++k) {
      std::size_t free_count = 0;
      int first_free = 0;
      bool sat = false;
      for (int lit : f.clauses[k]) {
        int val = rho[std::abs(lit) - 1];
        if (val < 0) {
          if (free_count++ == 0) first_free = std::abs(lit);
        } else if ((lit > 0) == (val == 1)) {
          sat = true;
        }
      }
      if (sat) continue;
      if (free_count == 0) {
        d.nodes[id].sink = k + 1;
        return id;
      }
      if (best == f.clauses.size() || free_count < best_free) {
        best = k;
        best_free = free_count;
        branch = first_free;
      }
    }
    if (best == f.clauses.size()) throw Error("decision_tree_scp: formula is satisfiable");
    std::size_t v = static_cast<std::size_t>(branch - 1);
    rho[v] = 0;
    std::size_t c0 = self(self);
    rho[v] = 1;
    std::size_t c1 = self(self);
    rho[v] = -1;
    d.nodes[id].children = {c0, c1};
    return id;
  };
  build(build);
  return d;
}

ProofStats stats(const CpProof& p) {
  ProofStats s;
  s.size = p.lines.size();
  std::vector<std::size_t> depth(p.lines.size(), 1);
  for (std::size_t i = 0; i < p.lines.size(); ++i) {
    const auto& j = p.lines[i].just;
    if (auto* lc = std::get_if<CpLinComb>(&j)) {
      for (const auto& [k, l] : lc->terms) depth[i] = std::max(depth[i], depth.at(k) + 1);
    } else if (auto* dv = std::get_if<CpDivision>(&j)) {
      depth[i] = depth.at(dv->line) + 1;
    }
    s.depth = std::max(s.depth, depth[i]);
    for (const auto& c : p.lines[i].ineq.coeffs) s.max_coeff_bits = std::max(s.max_coeff_bits, bit_length(c));
  }
  return s;
}

ProofStats stats(const ScpDag& d) {
  ProofStats s;
  s.size = d.nodes.size();
  std::vector<std::size_t> height(d.nodes.size(), 0);
  for (std::size_t v = d.nodes.size(); v-- > 0;) {
    for (std::size_t c : d.nodes[v].children) height[v] = std::max(height[v], height.at(c) + 1);
    for (const auto& c : d.nodes[v].h.coeffs) s.max_coeff_bits = std::max(s.max_coeff_bits, bit_length(c));
  }
  if (!d.nodes.empty()) s.depth = height[0];
  return s;
}

CpProof read_cp(std::istream& in, const Polytope& axioms) {
  detail::LineReader r(in);
  std::vector<std::string> t;
  if (!r.next(t) || t.size() != 4 || t[0] != "p" || t[1] != "cp") r.fail("expected 'p cp n L'");
  const std::size_t n = detail::to_size(r, t[2]), L = detail::to_size(r, t[3]);
  if (n != axioms.dim) r.fail("proof dimension differs from the instance");
  CpProof p;
  p.axioms = axioms;
  while (r.next(t)) {
    if (t.size() < 2 || t[1] != ":") r.fail("expected 'i : ...'");
    if (detail::to_size(r, t[0]) != p.lines.size() + 1) r.fail("line numbers must be consecutive from 1");
    CpLine line;
    std::size_t pos = parse_ineq(r, t, 2, n, line.ineq);
    if (pos >= t.size()) r.fail("missing justification");
    const std::string& kind = t[pos];
    auto one_based = [&](const std::string& s) {
      std::size_t v = detail::to_size(r, s);
      if (v == 0) r.fail("indices are 1-based");
      return v - 1;
    };
    if (kind == "axiom") {
      if (t.size() != pos + 2) r.fail("expected 'axiom k'");
      line.just = CpAxiom{one_based(t[pos + 1])};
    } else if (kind == "lin") {
      CpLinComb lc;
      for (std::size_t k = pos + 1; k < t.size(); ++k) {
        auto star = t[k].find('*');
        if (star == std::string::npos) r.fail("expected 'i*lambda'");
        Integer lam;
        if (!detail::parse_integer(t[k].substr(star + 1), lam)) r.fail("bad multiplier '" + t[k] + "'");
        lc.terms.emplace_back(one_based(t[k].substr(0, star)), lam);
      }
      line.just = std::move(lc);
    } else if (kind == "div") {
      if (t.size() != pos + 3) r.fail("expected 'div i d'");
      Integer d;
      if (!detail::parse_integer(t[pos + 2], d)) r.fail("bad divisor");
      line.just = CpDivision{one_based(t[pos + 1]), d};
    } else {
      r.fail("unknown justification '" + kind + "'");
    }
    p.lines.push_back(std::move(line));
  }
  if (p.lines.size() != L)
    throw Error("cp: header declares " + std::to_string(L) + " lines, found " + std::to_string(p.lines.size()));
  return p;
}

void write_cp(std::ostream& out, const CpProof& p) {
  out << "p cp " << p.dim() << " " << p.lines.size() << "\n";
  for (std::size_t i = 0; i < p.lines.size(); ++i) {
    const CpLine& l = p.lines[i];
    out << i + 1 << " : " << ineq_tokens(l.ineq) << " ; ";
    if (auto* ax = std::get_if<CpAxiom>(&l.just)) {
      out << "axiom " << ax->index + 1;
    } else if (auto* lc = std::get_if<CpLinComb>(&l.just)) {
      out << "lin";
      for (const auto& [k, lam] : lc->terms) out << " " << k + 1 << "*" << lam;
    } else {
      const auto& dv = std::get<CpDivision>(l.just);
      out << "div " << dv.line + 1 << " " << dv.divisor;
    }
    out << "\n";
  }
}

ScpDag read_scp(std::istream& in) {
  detail::LineReader r(in);
  std::vector<std::string> t;
  if (!r.next(t) || t.size() != 4 || t[0] != "p" || t[1] != "scp") r.fail("expected 'p scp n N'");
  ScpDag d;
  d.n = detail::to_size(r, t[2]);
  const std::size_t N = detail::to_size(r, t[3]);
  while (r.next(t)) {
    if (t.size() < 2 || t[1] != ":") r.fail("expected 'v : ...'");
    if (detail::to_size(r, t[0]) != d.nodes.size() + 1) r.fail("node numbers must be consecutive from 1");
    ScpNode node;
    std::size_t pos = parse_ineq(r, t, 2, d.n, node.h);
    if (pos >= t.size()) r.fail("expected 'children ...' or 'sink k'");
    if (t[pos] == "sink") {
      if (t.size() != pos + 2) r.fail("expected 'sink k'");
      node.sink = detail::to_size(r, t[pos + 1]);
    } else if (t[pos] == "children") {
      for (std::size_t k = pos + 1; k < t.size(); ++k) {
        std::size_t c = detail::to_size(r, t[k]);
        if (c == 0) r.fail("node indices are 1-based");
        node.children.push_back(c - 1);
      }
    } else {
      r.fail("expected 'children' or 'sink'");
    }
    d.nodes.push_back(std::move(node));
  }
  if (d.nodes.size() != N)
    throw Error("scp: header declares " + std::to_string(N) + " nodes, found " + std::to_string(d.nodes.size()));
  return d;
}

void write_scp(std::ostream& out, const ScpDag& d) {
  out << "p scp " << d.n << " " << d.nodes.size() << "\n";
  for (std::size_t v = 0; v < d.nodes.size(); ++v) {
    const auto& node = d.nodes[v];
    out << v + 1 << " : " << ineq_tokens(node.h) << " ; ";
    if (node.sink) {
      out << "sink " << *node.sink;
    } else {
      out << "children";
      for (std::size_t c : node.children) out << " " << c + 1;
    }
    out << "\n";
  }
}

}  // namespace cpsp
