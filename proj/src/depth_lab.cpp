#include "cpsp/depth_lab.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "cpsp/lp.hpp"

namespace cpsp {

namespace {

const Rational kHalf(1, 2);

RatVec halves(std::size_t n) { return RatVec(n, kHalf); }

// w.x >= c in 0/1 coordinates becomes (-w).y >= 2c - sum(w) under
// x = (1 - y)/2.
LinIneq to_pm1(const LinIneq& h) {
  Integer sum = 0;
  for (const auto& w : h.coeffs) sum += w;
  return LinIneq(negate(h.coeffs), Rational(2) * h.rhs - Rational(sum));
}

// Position of each global free variable inside rho's free list.
std::vector<std::size_t> local_index(const Restriction& rho, const std::vector<std::size_t>& globals) {
  std::vector<std::size_t> fr = rho.free_vars();
  std::vector<std::size_t> out;
  for (std::size_t g : globals) {
    auto it = std::lower_bound(fr.begin(), fr.end(), g);
    if (it == fr.end() || *it != g) throw Error("walk: variable x" + std::to_string(g) + " is not free");
    out.push_back(static_cast<std::size_t>(it - fr.begin()));
  }
  return out;
}

// rho extended by a restriction over its free coordinates.
Restriction extend(const Restriction& rho, const Restriction& local) {
  std::vector<std::size_t> fr = rho.free_vars();
  if (fr.size() != local.size()) throw Error("walk: restriction size mismatch");
  Restriction out = rho;
  for (std::size_t k = 0; k < fr.size(); ++k)
    if (!local.is_free(k)) out.fix(fr[k], local.value(k));
  return out;
}

// Fixes the global variables I of rho so their XOR is b while h under the
// result stays good.
Restriction fix_consistently(const Restriction& rho, const LinIneq& h,
                             const std::vector<std::size_t>& I, int b) {
  LinIneq hr = apply_restriction(h, rho);
  std::vector<std::size_t> loc = local_index(rho, I);
  if (loc.size() == 1) {
    // A single coordinate: follow the sign of its weight.
    Restriction one(hr.dim());
    one.fix(loc[0], hr.coeffs[loc[0]] >= 0 ? 1 : 0);
    return extend(rho, one);
  }
  return extend(rho, consistent_restriction(hr, loc, b));
}

std::string fixed_diff(const Restriction& before, const Restriction& after) {
  std::ostringstream os;
  bool any = false;
  for (std::size_t i = 0; i < after.size(); ++i) {
    if (before.is_free(i) && !after.is_free(i)) {
      os << (any ? " " : "") << "x" << i << "=" << after.value(i);
      any = true;
    }
  }
  return any ? os.str() : "-";
}

bool single_child(const ScpDag& d, const ScpNode& node) {
  return node.children.size() == 1 ||
         (node.children.size() == 2 &&
          (node.children[0] == node.children[1] ||
           d.nodes[node.children[0]].h == d.nodes[node.children[1]].h));
}

}  // namespace

bool is_good(const LinIneq& h) { return h.satisfied_by(halves(h.dim())); }

Restriction consistent_restriction(const LinIneq& h, const std::vector<std::size_t>& I, int b) {
  if (I.size() < 2) throw Error("consistent_restriction: need |I| >= 2");
  if (b != 0 && b != 1) throw Error("consistent_restriction: parity must be 0 or 1");
  if (!is_good(h)) throw Error("consistent_restriction: halfspace is not good");
  std::vector<std::size_t> idx = I;
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end() || idx.back() >= h.dim())
    throw Error("consistent_restriction: bad index set");
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    return abs(h.coeffs[x]) > abs(h.coeffs[y]);
  });
  Restriction rho(h.dim());
  int parity = 0;
  for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
    int v = h.coeffs[idx[k]] >= 0 ? 1 : 0;
    rho.fix(idx[k], v);
    parity ^= v;
  }
  rho.fix(idx.back(), parity ^ b);
  if (!is_good(apply_restriction(h, rho)))
    throw Error("consistent_restriction: restricted halfspace lost the all-1/2 point");
  return rho;
}

TwoFacePoint orthogonal_2face_vector(const IntVec& w1, const IntVec& w2) {
  const std::size_t n = w1.size();
  if (w2.size() != n) throw Error("orthogonal_2face_vector: dimension mismatch");
  if (n < 3) throw Error("orthogonal_2face_vector: need n >= 3");
  if (is_zero(w1) || is_zero(w2)) throw Error("orthogonal_2face_vector: zero normal");
  RatVec v(n, Rational(0));
  std::vector<bool> fixed(n, false);
  std::size_t nfixed = 0;
  while (nfixed + 2 < n) {
    std::vector<IntVec> rows{w1, w2};
    for (std::size_t i = 0; i < n; ++i)
      if (fixed[i]) rows.push_back(unit(n, i));
    auto u = nullspace_vector(rows, n);
    if (!u) throw Error("orthogonal_2face_vector: no nullspace direction");
    bool have = false;
    Rational alpha;
    for (std::size_t j = 0; j < n; ++j) {
      if (fixed[j] || (*u)[j] == 0) continue;
      Rational target((*u)[j] > 0 ? 1 : -1);
      Rational a = (target - v[j]) / (*u)[j];
      if (!have || a < alpha) alpha = a, have = true;
    }
    if (!have) throw Error("orthogonal_2face_vector: direction vanishes on free coordinates");
    for (std::size_t j = 0; j < n; ++j) {
      if (fixed[j]) continue;
      v[j] += alpha * (*u)[j];
      if (abs(v[j]) == 1) fixed[j] = true, ++nfixed;
    }
  }
  TwoFacePoint out;
  out.v = v;
  std::vector<std::size_t> fr;
  for (std::size_t j = 0; j < n; ++j)
    if (!fixed[j]) fr.push_back(j);
  // Several coordinates can reach +-1 on the same step; any of them can serve
  // as a face coordinate.
  for (std::size_t j = 0; fr.size() < 2; ++j)
    if (fixed[j]) fr.push_back(j);
  std::sort(fr.begin(), fr.end());
  out.free[0] = fr[0];
  out.free[1] = fr[1];
  return out;
}

CruxChoice crux_select(const LinIneq& h, const LinIneq& h1, const LinIneq& h2) {
  const std::size_t n = h.dim();
  if (h1.dim() != n || h2.dim() != n) throw Error("crux_select: dimension mismatch");
  if (!is_good(h)) throw Error("crux_select: H is not good");
  if (h1.is_universal() || is_good(h1)) return {0, Restriction(n)};
  if (h2.is_universal() || is_good(h2)) return {1, Restriction(n)};

  const LinIneq P = to_pm1(h), P1 = to_pm1(h1), P2 = to_pm1(h2);
  auto in = [](const LinIneq& q, const RatVec& y) { return q.satisfied_by(y); };
  RatVec y;
  int child = -1;

  auto pick_child = [&](const RatVec& a) {
    if (in(P1, a)) return 0;
    if (in(P2, a)) return 1;
    throw Error("crux_select: cover violated, a corner of H lies in neither child");
  };

  if (n <= 2) {
    // Every corner has at most two boolean coordinates.
    for (std::size_t mask = 0; mask < (std::size_t{1} << n) && child < 0; ++mask) {
      RatVec a(n);
      for (std::size_t i = 0; i < n; ++i) a[i] = (mask >> (n - 1 - i)) & 1 ? 1 : -1;
      if (!in(P, a)) continue;
      child = pick_child(a);
      y = a;
    }
    if (child < 0) throw Error("crux_select: H has no corner");
  } else {
    IntVec W1 = P1.coeffs, W2 = P2.coeffs;
    if (is_zero(W1) && is_zero(W2)) throw Error("crux_select: cover violated, both children empty");
    if (is_zero(W1)) W1 = W2;
    if (is_zero(W2)) W2 = W1;
    TwoFacePoint f = orthogonal_2face_vector(W1, W2);
    RatVec v = f.v;
    const std::size_t p = f.free[0], q = f.free[1];
    auto options = [](const Rational& x) {
      if (x > 0) return std::vector<int>{1};
      if (x < 0) return std::vector<int>{-1};
      return std::vector<int>{-1, 1};
    };
    std::vector<RatVec> corners;
    for (int ap : options(v[p]))
      for (int aq : options(v[q])) {
        RatVec a = v;
        a[p] = ap;
        a[q] = aq;
        corners.push_back(a);
      }
    RatVec a;
    bool found = false;
    for (const auto& c : corners)
      if (in(P, c)) {
        a = c;
        found = true;
        break;
      }
    if (!found) {
      // H contains the origin, so the opposite corner is in H.
      a = corners.front();
      for (auto& x : a) x = -x;
      for (auto& x : v) x = -x;
      if (!in(P, a)) throw Error("crux_select: neither a nor -a lies in H");
    }
    child = pick_child(a);
    const LinIneq& Pj = child == 0 ? P1 : P2;
    RatVec diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = a[i] - v[i];
    if (dot(Pj.coeffs, diff) <= 0) {
      y = RatVec(n, Rational(0));
    } else {
      Rational alpha;
      bool have = false;
      for (std::size_t i : {p, q}) {
        if (diff[i] == 0) continue;
        Rational s = 1 / abs(diff[i]);
        if (!have || s < alpha) alpha = s, have = true;
      }
      y = RatVec(n, Rational(0));
      for (std::size_t i : {p, q}) y[i] = alpha * diff[i];
      for (std::size_t i : {p, q}) {
        if (y[i] == 0 || abs(y[i]) == 1) continue;
        y[i] = Pj.coeffs[i] >= 0 ? 1 : -1;
      }
    }
  }

  const LinIneq& Pj = child == 0 ? P1 : P2;
  if (!in(Pj, y)) throw Error("crux_select: selected point left the child halfspace");
  Restriction rho(n);
  std::size_t nb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] == 0) continue;
    if (abs(y[i]) != 1) throw Error("crux_select: point is not in {-1,0,1}^n");
    rho.fix(i, y[i] == 1 ? 0 : 1);
    ++nb;
  }
  if (nb > 2) throw Error("crux_select: more than two boolean coordinates");
  if (!is_good(apply_restriction(child == 0 ? h1 : h2, rho)))
    throw Error("crux_select: restricted child is not good");
  return {child, rho};
}

ProverAdversaryGame::ProverAdversaryGame(const Cnf& f, std::size_t max_vars) : f_(f) {
  f_.validate();
  if (f_.num_vars > max_vars)
    throw BudgetExceeded("res_depth: " + std::to_string(f_.num_vars) + " variables exceed budget " +
                         std::to_string(max_vars));
  pow3_.assign(f_.num_vars + 1, 1);
  for (std::size_t i = 1; i <= f_.num_vars; ++i) pow3_[i] = pow3_[i - 1] * 3;
  memo_.assign(pow3_[f_.num_vars], 254);
}

std::uint64_t ProverAdversaryGame::encode(const Restriction& rho) const {
  if (rho.size() != f_.num_vars) throw Error("game: restriction size mismatch");
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < rho.size(); ++i)
    s += pow3_[i] * (rho.is_free(i) ? 2 : static_cast<std::uint64_t>(rho.value(i)));
  return s;
}

bool ProverAdversaryGame::falsified(std::uint64_t state) const {
  for (const auto& c : f_.clauses) {
    bool all_false = true;
    for (int lit : c) {
      std::size_t v = static_cast<std::size_t>(std::abs(lit)) - 1;
      std::uint64_t digit = state / pow3_[v] % 3;
      if (digit == 2 || (digit == 1) == (lit > 0)) {
        all_false = false;
        break;
      }
    }
    if (all_false) return true;
  }
  return false;
}

std::uint8_t ProverAdversaryGame::solve(std::uint64_t state) const {
  std::uint8_t& slot = memo_[state];
  if (slot != 254) return slot;
  if (falsified(state)) return slot = 0;
  unsigned best = kInfinite;
  bool any_free = false;
  for (std::size_t i = 0; i < f_.num_vars; ++i) {
    if (state / pow3_[i] % 3 != 2) continue;
    any_free = true;
    std::uint64_t base = state - 2 * pow3_[i];
    unsigned v = std::max(solve(base), solve(base + pow3_[i]));
    best = std::min(best, v);
  }
  if (!any_free || best == kInfinite) return slot = kInfinite;
  return slot = static_cast<std::uint8_t>(best + 1);
}

std::uint8_t ProverAdversaryGame::value(const Restriction& rho) const { return solve(encode(rho)); }

int ProverAdversaryGame::answer(const Restriction& rho, std::size_t var) const {
  if (!rho.is_free(var)) throw Error("game: queried variable is already set");
  Restriction r0 = rho, r1 = rho;
  r0.fix(var, 0);
  r1.fix(var, 1);
  return value(r1) > value(r0) ? 1 : 0;
}

bool ProverAdversaryGame::falsifies_clause(const Restriction& rho) const { return falsified(encode(rho)); }

unsigned res_depth(const Cnf& f, std::size_t max_vars) {
  return ProverAdversaryGame(f, max_vars).depth();
}

LinSystemFq xor4_lift(const LinSystemFq& sys) {
  if (sys.q != 2) throw Error("xor4_lift: need q = 2");
  LinSystemFq out;
  out.n = 4 * sys.n;
  out.q = 2;
  out.d = 4 * sys.d;
  for (const auto& e : sys.equations) {
    Equation l;
    l.rhs = e.rhs;
    for (std::size_t v : e.vars)
      for (std::size_t j = 0; j < 4; ++j) {
        l.vars.push_back(4 * v + j);
        l.coeffs.push_back(1);
      }
    out.equations.push_back(std::move(l));
  }
  return out;
}

namespace {

void require_valid(const ScpDag& d, const Cnf& f, const char* who) {
  if (d.nodes.empty()) throw Error(std::string(who) + ": empty DAG");
  Verdict v = verify_scp(d, f);
  if (!v) throw Error(std::string(who) + ": DAG is not a valid refutation: " + v.reason);
}

std::string summary(const WalkResult& w) {
  return "summary : path_length=" + std::to_string(w.length()) +
         " ; invariant_checks=" + std::to_string(w.invariant_checks) + " ; stop=" + w.stop_reason;
}

}  // namespace

WalkResult lifted_walk(const ScpDag& d, const Cnf& lifted, const Cnf& f) {
  const std::size_t n = f.num_vars;
  if (lifted.num_vars != 4 * n || d.n != 4 * n) throw Error("lifted_walk: lifted dimension must be 4n");
  require_valid(d, lifted, "lifted_walk");
  ProverAdversaryGame game(f);
  const unsigned D = game.depth();
  if (D == ProverAdversaryGame::kInfinite) throw Error("lifted_walk: f is satisfiable");

  WalkResult w;
  Restriction rho(4 * n);
  std::size_t node = 0;
  w.path.push_back(node);

  auto unlifted = [&]() {
    Restriction z(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (rho.is_free(4 * i)) continue;
      int x = 0;
      for (std::size_t j = 0; j < 4; ++j) x ^= rho.value(4 * i + j);
      z.fix(i, x);
    }
    return z;
  };
  // Block Closed and Good Halfspace must hold; returns Strategy Consistent.
  auto check = [&]() {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t nf = 0;
      for (std::size_t j = 0; j < 4; ++j) nf += rho.is_free(4 * i + j);
      if (nf != 0 && nf != 4) throw Error("lifted_walk: block " + std::to_string(i) + " is open");
    }
    if (!is_good(apply_restriction(d.nodes[node].h, rho)))
      throw Error("lifted_walk: halfspace at node " + std::to_string(node) + " is not good");
    w.invariant_checks += 3;
    return !game.falsifies_clause(unlifted());
  };

  for (std::size_t step = 1;; ++step) {
    if (!check()) {
      if (2 * w.length() < D)
        throw Error("lifted_walk: adversary failed after " + std::to_string(w.length()) + " steps");
      w.stop_reason = "adversary-forced";
      break;
    }
    const ScpNode& cur = d.nodes[node];
    if (cur.children.empty())
      throw Error("lifted_walk: reached sink " + std::to_string(node) + " with all invariants intact");
    Restriction before = rho;
    std::size_t next;
    if (single_child(d, cur)) {
      next = cur.children[0];
    } else {
      const LinIneq& h1 = d.nodes[cur.children[0]].h;
      const LinIneq& h2 = d.nodes[cur.children[1]].h;
      CruxChoice c = crux_select(apply_restriction(cur.h, rho), apply_restriction(h1, rho),
                                 apply_restriction(h2, rho));
      next = cur.children[static_cast<std::size_t>(c.child)];
      const LinIneq& hc = d.nodes[next].h;
      Restriction rt = extend(rho, c.rho);
      std::vector<std::size_t> blocks;
      for (std::size_t v : c.rho.fixed_vars()) {
        std::size_t b = rho.free_vars()[v] / 4;
        if (std::find(blocks.begin(), blocks.end(), b) == blocks.end()) blocks.push_back(b);
      }
      Restriction z = unlifted();
      for (std::size_t b : blocks) {
        int ans = game.answer(z, b);
        z.fix(b, ans);
        std::vector<std::size_t> I;
        int parity = ans;
        for (std::size_t j = 0; j < 4; ++j) {
          if (rt.is_free(4 * b + j)) I.push_back(4 * b + j);
          else parity ^= rt.value(4 * b + j);
        }
        rt = fix_consistently(rt, hc, I, parity);
      }
      rho = rt;
    }
    node = next;
    w.path.push_back(node);
    w.transcript.push_back("step " + std::to_string(step) + " : node " + std::to_string(node) +
                           " ; fixed " + fixed_diff(before, rho) +
                           " ; k=" + std::to_string(game.value(unlifted())));
  }
  w.transcript.push_back(summary(w));
  return w;
}

namespace {

// Largest W with |W| <= k and |delta(W)| <= 3|W|, lexicographically first.
std::vector<std::size_t> low_expansion_set(const LinSystemFq& sys, std::size_t k) {
  const std::size_t m = sys.m();
  k = std::min(k, m);
  Integer total = 0, binom = 1;
  for (std::size_t s = 1; s <= k; ++s) {
    binom = binom * Integer(static_cast<unsigned long>(m - s + 1)) / Integer(static_cast<unsigned long>(s));
    total += binom;
  }
  if (total > Integer(static_cast<unsigned long>(enumeration_budget())))
    throw BudgetExceeded("expander_walk: cleanup set search exceeds budget");
  for (std::size_t s = k; s >= 1; --s) {
    std::vector<std::size_t> idx(s);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      if (boundary_size(sys, idx) <= 3 * s) return idx;
      std::size_t i = s;
      while (i > 0 && idx[i - 1] == m - s + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < s; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return {};
}

// Fixes every variable of the equations W of sys (restricted by rho) so that
// all of them hold and h stays good.
Restriction boundary_cleanup(const LinSystemFq& sys, const std::vector<std::size_t>& W,
                             const Restriction& rho, const LinIneq& h) {
  std::vector<std::size_t> rest = W;
  std::vector<std::pair<std::size_t, std::pair<std::size_t, std::size_t>>> peeled;
  while (!rest.empty()) {
    std::vector<std::size_t> count(sys.n, 0);
    for (std::size_t e : rest)
      for (std::size_t v : sys.equations[e].vars) ++count[v];
    bool found = false;
    for (std::size_t k = 0; k < rest.size() && !found; ++k) {
      std::vector<std::size_t> bd;
      for (std::size_t v : sys.equations[rest[k]].vars)
        if (count[v] == 1) bd.push_back(v);
      if (bd.size() >= 2) {
        peeled.push_back({rest[k], {bd[0], bd[1]}});
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
        found = true;
      }
    }
    if (!found) throw Error("expander_walk: non-expanding input detected during cleanup");
  }
  std::vector<std::size_t> I;
  for (std::size_t e : W)
    for (std::size_t v : sys.equations[e].vars) {
      bool paired = false;
      for (const auto& pc : peeled) paired |= pc.second.first == v || pc.second.second == v;
      if (!paired && std::find(I.begin(), I.end(), v) == I.end()) I.push_back(v);
    }
  std::sort(I.begin(), I.end());
  Restriction out = rho;
  if (!I.empty()) out = fix_consistently(out, h, I, 0);
  // Pair variables of a constraint only occur in constraints peeled before
  // it, so the constraints are satisfied last-peeled first.
  for (auto it = peeled.rbegin(); it != peeled.rend(); ++it) {
    const Equation& e = sys.equations[it->first];
    int parity = static_cast<int>(e.rhs);
    std::vector<std::size_t> pair{it->second.first, it->second.second};
    for (std::size_t v : e.vars)
      if (v != pair[0] && v != pair[1]) {
        if (out.is_free(v)) throw Error("expander_walk: cleanup left a variable open");
        parity ^= out.value(v);
      }
    out = fix_consistently(out, h, pair, parity);
  }
  return out;
}

}  // namespace

WalkResult expander_walk(const ScpDag& d, const LinSystemFq& sys, std::size_t r, std::size_t s) {
  sys.validate();
  if (sys.q != 2) throw Error("expander_walk: need q = 2");
  if (d.n != sys.n) throw Error("expander_walk: dimension mismatch");
  if (r == 0 || r > sys.m()) throw Error("expander_walk: need 1 <= r <= m");
  require_valid(d, to_cnf(sys), "expander_walk");
  ExpansionResult ex = boundary_expansion(sys, r);
  if (ex.ratio < Rational(static_cast<long>(s) + 3))
    throw Error("expander_walk: system is not an (r, s+3) boundary expander");

  WalkResult w;
  Restriction rho(sys.n);
  std::size_t k = r, node = 0;
  w.path.push_back(node);

  auto check = [&]() {
    RestrictedSystem rs = apply_restriction(sys, rho);
    if (!rs.falsified.empty()) throw Error("expander_walk: restriction falsifies an equation");
    if (!is_good(apply_restriction(d.nodes[node].h, rho)))
      throw Error("expander_walk: halfspace at node " + std::to_string(node) + " is not good");
    if (k > 0 && rs.system.m() > 0) {
      ExpansionResult e = boundary_expansion(rs.system, std::min(k, rs.system.m()));
      if (e.ratio <= 3) throw Error("expander_walk: restricted system lost expansion");
    }
    w.invariant_checks += 3;
  };

  for (std::size_t step = 1;; ++step) {
    check();
    if (k == 0) {
      w.stop_reason = "budget-exhausted";
      break;
    }
    const ScpNode& cur = d.nodes[node];
    if (cur.children.empty())
      throw Error("expander_walk: node " + std::to_string(node) +
                  " is a sink while k > 0; a contradiction path exists so the DAG is not a refutation");
    Restriction before = rho;
    std::size_t next;
    if (single_child(d, cur)) {
      next = cur.children[0];
    } else {
      const LinIneq& h1 = d.nodes[cur.children[0]].h;
      const LinIneq& h2 = d.nodes[cur.children[1]].h;
      CruxChoice c = crux_select(apply_restriction(cur.h, rho), apply_restriction(h1, rho),
                                 apply_restriction(h2, rho));
      next = cur.children[static_cast<std::size_t>(c.child)];
      Restriction rt = extend(rho, c.rho);
      RestrictedSystem rs = apply_restriction(sys, rt);
      std::vector<std::size_t> W = low_expansion_set(rs.system, k);
      if (!W.empty()) rt = boundary_cleanup(rs.system, W, rt, d.nodes[next].h);
      k -= W.size();
      rho = rt;
    }
    node = next;
    w.path.push_back(node);
    w.transcript.push_back("step " + std::to_string(step) + " : node " + std::to_string(node) +
                           " ; fixed " + fixed_diff(before, rho) + " ; k=" + std::to_string(k));
  }
  w.transcript.push_back(summary(w));
  return w;
}

}  // namespace cpsp
