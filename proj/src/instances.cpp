#include "cpsp/instances.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>
#include <string>

#include "cpsp/lp.hpp"
#include "cpsp/rng.hpp"
#include "text_util.hpp"

namespace cpsp {

namespace {

long mod(long a, long q) { return ((a % q) + q) % q; }

std::vector<std::size_t> sample_distinct(SplitMix64& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

void Cnf::validate() const {
  for (const auto& c : clauses) {
    std::set<int> seen;
    for (int lit : c) {
      if (lit == 0) throw Error("cnf: literal 0 inside a clause");
      std::size_t v = static_cast<std::size_t>(std::abs(lit));
      if (v > num_vars) throw Error("cnf: variable " + std::to_string(v) + " out of range");
      if (seen.count(-lit)) throw Error("cnf: clause contains a variable and its negation");
      seen.insert(lit);
    }
  }
}

bool Cnf::satisfied_by(const std::vector<std::uint8_t>& x) const {
  for (const auto& c : clauses) {
    bool sat = false;
    for (int lit : c) {
      bool v = x.at(static_cast<std::size_t>(std::abs(lit)) - 1) != 0;
      if ((lit > 0) == v) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

void LinSystemFq::validate() const {
  if (!is_prime(q)) throw Error("linear system: modulus " + std::to_string(q) + " is not prime");
  for (std::size_t i = 0; i < equations.size(); ++i) {
    const auto& e = equations[i];
    const std::string where = "linear system: equation " + std::to_string(i + 1);
    if (e.vars.size() != e.coeffs.size()) throw Error(where + ": support/coefficient mismatch");
    if (e.vars.size() > d) throw Error(where + ": width exceeds bound d");
    if (e.rhs < 0 || e.rhs >= q) throw Error(where + ": rhs outside [0, q)");
    for (std::size_t k = 0; k < e.vars.size(); ++k) {
      if (e.vars[k] >= n) throw Error(where + ": variable out of range");
      if (k > 0 && e.vars[k] <= e.vars[k - 1]) throw Error(where + ": support not ascending");
      if (e.coeffs[k] <= 0 || e.coeffs[k] >= q) throw Error(where + ": coefficient outside [1, q)");
    }
  }
}

bool LinSystemFq::satisfied_by(const std::vector<long>& x) const {
  for (const auto& e : equations) {
    long s = 0;
    for (std::size_t k = 0; k < e.vars.size(); ++k) s = mod(s + e.coeffs[k] * x.at(e.vars[k]), q);
    if (s != e.rhs) return false;
  }
  return true;
}

std::vector<std::vector<long>> LinSystemFq::matrix() const {
  std::vector<std::vector<long>> a(equations.size(), std::vector<long>(n, 0));
  for (std::size_t i = 0; i < equations.size(); ++i)
    for (std::size_t k = 0; k < equations[i].vars.size(); ++k)
      a[i][equations[i].vars[k]] = equations[i].coeffs[k];
  return a;
}

std::vector<long> LinSystemFq::rhs() const {
  std::vector<long> b;
  for (const auto& e : equations) b.push_back(e.rhs);
  return b;
}

void Graph::validate() const {
  if (labels.size() != n) throw Error("graph: expected one label per vertex");
  for (int l : labels)
    if (l != 0 && l != 1) throw Error("graph: labels must be 0 or 1");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw Error("graph: edge endpoint out of range");
    if (u == v) throw Error("graph: self-loop");
    if (!seen.insert({std::min(u, v), std::max(u, v)}).second) throw Error("graph: duplicate edge");
  }
}

bool Graph::connected() const {
  if (n == 0) return false;
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v : adj[u])
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        stack.push_back(v);
      }
  }
  return count == n;
}

Graph complete_graph(std::size_t n) {
  Graph g;
  g.n = n;
  g.labels.assign(n, 0);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) g.edges.emplace_back(u, v);
  return g;
}

Graph cycle_graph(std::size_t n) {
  if (n < 3) throw Error("cycle_graph: need at least 3 vertices");
  Graph g;
  g.n = n;
  g.labels.assign(n, 0);
  for (std::size_t u = 0; u < n; ++u) g.edges.emplace_back(u, (u + 1) % n);
  return g;
}

LinSystemFq tseitin(const Graph& g) {
  g.validate();
  if (!g.connected()) throw Error("tseitin: graph is not connected");
  LinSystemFq sys;
  sys.n = g.edges.size();
  sys.q = 2;
  sys.equations.resize(g.n);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    sys.equations[g.edges[e].first].vars.push_back(e);
    sys.equations[g.edges[e].second].vars.push_back(e);
  }
  for (std::size_t v = 0; v < g.n; ++v) {
    auto& eq = sys.equations[v];
    eq.coeffs.assign(eq.vars.size(), 1);
    eq.rhs = g.labels[v];
    sys.d = std::max(sys.d, eq.vars.size());
  }
  return sys;
}

std::size_t bits_per_var(long q) {
  if (q < 2) throw Error("bits_per_var: q must be at least 2");
  std::size_t b = 0;
  while ((1L << b) < q) ++b;
  return b;
}

Cnf to_cnf(const LinSystemFq& sys) {
  sys.validate();
  const std::size_t B = bits_per_var(sys.q);
  Cnf f;
  f.num_vars = sys.n * B;
  auto lit = [&](std::size_t var, std::size_t bit, bool value_is_one) {
    int v = static_cast<int>(var * B + bit + 1);
    // The clause forbids this bit value, so it must contain the opposite literal.
    return value_is_one ? -v : v;
  };
  for (std::size_t i = 0; i < sys.n && sys.q != 2; ++i) {
    for (long value = sys.q; value < (1L << B); ++value) {
      Clause c;
      for (std::size_t j = B; j-- > 0;) c.push_back(lit(i, j, (value >> j) & 1));
      f.clauses.push_back(c);
    }
  }
  for (const auto& e : sys.equations) {
    const std::size_t w = e.vars.size();
    std::vector<long> val(w, 0);
    while (true) {
      long s = 0;
      for (std::size_t k = 0; k < w; ++k) s = mod(s + e.coeffs[k] * val[k], sys.q);
      if (s != e.rhs) {
        Clause c;
        for (std::size_t k = 0; k < w; ++k)
          for (std::size_t j = B; j-- > 0;) c.push_back(lit(e.vars[k], j, (val[k] >> j) & 1));
        f.clauses.push_back(c);
      }
      std::size_t k = 0;
      while (k < w && ++val[k] == sys.q) val[k++] = 0;
      if (k == w) break;
    }
  }
  return f;
}

Polytope to_polytope(const Cnf& f) {
  f.validate();
  const std::size_t n = f.num_vars;
  Polytope p(n);
  for (const auto& c : f.clauses) {
    IntVec a = zeros(n);
    long negatives = 0;
    for (int lit : c) {
      std::size_t v = static_cast<std::size_t>(std::abs(lit)) - 1;
      if (lit > 0) {
        a[v] += 1;
      } else {
        a[v] -= 1;
        ++negatives;
      }
    }
    p.add(LinIneq(a, 1 - negatives));
  }
  for (std::size_t i = 0; i < n; ++i) {
    p.add(LinIneq(unit(n, i), 0));
    p.add(LinIneq(unit(n, i, -1), -1));
  }
  return p;
}

LinSystemFq random_kxor(std::size_t n, std::size_t m, std::size_t k, std::uint64_t seed) {
  if (k == 0 || k > n) throw Error("random_kxor: need 1 <= k <= n");
  SplitMix64 rng(seed);
  LinSystemFq sys;
  sys.n = n;
  sys.q = 2;
  sys.d = k;
  for (std::size_t i = 0; i < m; ++i) {
    Equation e;
    e.vars = sample_distinct(rng, n, k);
    e.coeffs.assign(k, 1);
    e.rhs = static_cast<long>(rng.below(2));
    sys.equations.push_back(std::move(e));
  }
  return sys;
}

Cnf random_kcnf(std::size_t n, std::size_t m, std::size_t k, std::uint64_t seed) {
  if (k == 0 || k > n) throw Error("random_kcnf: need 1 <= k <= n");
  SplitMix64 rng(seed);
  Cnf f;
  f.num_vars = n;
  for (std::size_t i = 0; i < m; ++i) {
    Clause c;
    for (std::size_t v : sample_distinct(rng, n, k)) {
      int lit = static_cast<int>(v + 1);
      c.push_back(rng.below(2) ? lit : -lit);
    }
    f.clauses.push_back(std::move(c));
  }
  return f;
}

LinSystemFq cnf_to_kxor(const Cnf& f, std::size_t k) {
  f.validate();
  LinSystemFq sys;
  sys.n = f.num_vars;
  sys.q = 2;
  sys.d = k;
  for (std::size_t i = 0; i < f.clauses.size(); ++i) {
    const auto& c = f.clauses[i];
    std::set<std::size_t> vars;
    for (int lit : c) vars.insert(static_cast<std::size_t>(std::abs(lit)) - 1);
    if (c.size() != k || vars.size() != k)
      throw Error("cnf_to_kxor: clause " + std::to_string(i + 1) + " does not have width " +
                  std::to_string(k));
    // The clause excludes exactly the all-literals-false point, whose parity is
    // the number of negative literals; the equation must reject that parity.
    long negatives = std::count_if(c.begin(), c.end(), [](int l) { return l < 0; });
    Equation e;
    e.vars.assign(vars.begin(), vars.end());
    e.coeffs.assign(k, 1);
    e.rhs = (negatives + 1) % 2;
    sys.equations.push_back(std::move(e));
  }
  return sys;
}

Cnf xor4_lift(const Cnf& f) {
  f.validate();
  std::vector<unsigned> even, odd;
  for (unsigned m = 0; m < 16; ++m) (__builtin_popcount(m) % 2 ? odd : even).push_back(m);
  Cnf g;
  g.num_vars = 4 * f.num_vars;
  for (const auto& c : f.clauses) {
    const std::size_t w = c.size();
    std::vector<std::size_t> choice(w, 0);
    while (true) {
      Clause out;
      for (std::size_t k = 0; k < w; ++k) {
        const int lit = c[k];
        const std::size_t v = static_cast<std::size_t>(std::abs(lit)) - 1;
        // A positive literal is false when its block has even parity.
        unsigned pattern = (lit > 0 ? even : odd)[choice[k]];
        for (unsigned b = 0; b < 4; ++b) {
          int lifted = static_cast<int>(4 * v + b + 1);
          out.push_back((pattern >> b) & 1 ? -lifted : lifted);
        }
      }
      g.clauses.push_back(std::move(out));
      std::size_t k = 0;
      while (k < w && ++choice[k] == 8) choice[k++] = 0;
      if (k == w) break;
    }
  }
  return g;
}

std::size_t boundary_size(const LinSystemFq& sys, const std::vector<std::size_t>& subset) {
  std::vector<std::size_t> vars;
  for (std::size_t i : subset) {
    const auto& e = sys.equations.at(i);
    vars.insert(vars.end(), e.vars.begin(), e.vars.end());
  }
  std::sort(vars.begin(), vars.end());
  std::size_t count = 0;
  for (std::size_t i = 0; i < vars.size();) {
    std::size_t j = i;
    while (j < vars.size() && vars[j] == vars[i]) ++j;
    if (j - i == 1) ++count;
    i = j;
  }
  return count;
}

std::uint64_t enumeration_budget() {
  const char* env = std::getenv("CPSP_ENUM_BUDGET");
  if (env == nullptr || *env == '\0') return kDefaultEnumBudget;
  Integer z;
  if (!detail::parse_integer(env, z) || z <= 0 || !z.fits_ulong_p())
    throw Error(std::string("CPSP_ENUM_BUDGET: not a positive integer: ") + env);
  return z.get_ui();
}

ExpansionResult boundary_expansion(const LinSystemFq& sys, std::size_t r, std::uint64_t budget) {
  const std::size_t m = sys.m();
  if (r == 0 || r > m) throw Error("boundary_expansion: need 1 <= r <= m");
  if (budget == 0) budget = enumeration_budget();
  Integer binom = 1, total = 0;
  for (std::size_t k = 1; k <= r; ++k) {
    binom = binom * Integer(static_cast<unsigned long>(m - k + 1)) /
            Integer(static_cast<unsigned long>(k));
    total += binom;
  }
  if (total > Integer(static_cast<unsigned long>(budget)))
    throw BudgetExceeded("boundary_expansion: " + total.get_str() + " subsets exceed budget " +
                         std::to_string(budget));
  ExpansionResult best;
  bool have = false;
  for (std::size_t k = 1; k <= r; ++k) {
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      Rational ratio(static_cast<long>(boundary_size(sys, idx)), static_cast<long>(k));
      ratio.canonicalize();
      if (!have || ratio < best.ratio || (ratio == best.ratio && idx < best.worst_set)) {
        best.ratio = ratio;
        best.worst_set = idx;
        have = true;
      }
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == m - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return best;
}

void Restriction::fix(std::size_t i, int b) {
  if (b != 0 && b != 1) throw Error("restriction: value must be 0 or 1");
  val_.at(i) = static_cast<std::int8_t>(b);
}

std::vector<std::size_t> Restriction::free_vars() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < val_.size(); ++i)
    if (val_[i] == kFree) out.push_back(i);
  return out;
}

std::vector<std::size_t> Restriction::fixed_vars() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < val_.size(); ++i)
    if (val_[i] != kFree) out.push_back(i);
  return out;
}

LinIneq apply_restriction(const LinIneq& h, const Restriction& rho) {
  if (h.dim() != rho.size()) throw Error("apply_restriction: dimension mismatch");
  LinIneq out;
  out.rhs = h.rhs;
  for (std::size_t i = 0; i < h.dim(); ++i) {
    if (rho.is_free(i)) out.coeffs.push_back(h.coeffs[i]);
    else if (rho.value(i) == 1) out.rhs -= h.coeffs[i];
  }
  return out;
}

RestrictedSystem apply_restriction(const LinSystemFq& sys, const Restriction& rho) {
  if (sys.n != rho.size()) throw Error("apply_restriction: dimension mismatch");
  RestrictedSystem out;
  out.system.n = sys.n;
  out.system.q = sys.q;
  out.system.d = sys.d;
  for (std::size_t i = 0; i < sys.m(); ++i) {
    const auto& e = sys.equations[i];
    Equation r;
    r.rhs = e.rhs;
    for (std::size_t k = 0; k < e.vars.size(); ++k) {
      if (rho.is_free(e.vars[k])) {
        r.vars.push_back(e.vars[k]);
        r.coeffs.push_back(e.coeffs[k]);
      } else {
        r.rhs = mod(r.rhs - e.coeffs[k] * rho.value(e.vars[k]), sys.q);
      }
    }
    if (!r.vars.empty()) {
      out.system.equations.push_back(std::move(r));
      out.origin.push_back(i);
    } else if (r.rhs != 0) {
      out.falsified.push_back(i);
    }
  }
  return out;
}

RestrictedCnf apply_restriction(const Cnf& f, const Restriction& rho) {
  if (f.num_vars != rho.size()) throw Error("apply_restriction: dimension mismatch");
  RestrictedCnf out;
  out.cnf.num_vars = f.num_vars;
  for (std::size_t i = 0; i < f.clauses.size(); ++i) {
    Clause r;
    bool satisfied = false;
    for (int lit : f.clauses[i]) {
      std::size_t v = static_cast<std::size_t>(std::abs(lit)) - 1;
      if (rho.is_free(v)) {
        r.push_back(lit);
      } else if ((lit > 0) == (rho.value(v) == 1)) {
        satisfied = true;
        break;
      }
    }
    if (satisfied) continue;
    if (r.empty()) {
      out.falsified.push_back(i);
    } else {
      out.cnf.clauses.push_back(std::move(r));
      out.origin.push_back(i);
    }
  }
  return out;
}

Cnf read_dimacs(std::istream& in) {
  detail::LineReader r(in);
  std::vector<std::string> t;
  if (!r.next(t) || t.size() != 4 || t[0] != "p" || t[1] != "cnf") r.fail("expected 'p cnf n m'");
  Cnf f;
  f.num_vars = detail::to_size(r, t[2]);
  const std::size_t m = detail::to_size(r, t[3]);
  Clause cur;
  while (r.next(t)) {
    for (const auto& tok : t) {
      long lit = detail::to_long(r, tok);
      if (lit == 0) {
        f.clauses.push_back(std::move(cur));
        cur.clear();
      } else {
        if (static_cast<std::size_t>(std::labs(lit)) > f.num_vars) r.fail("literal out of range");
        cur.push_back(static_cast<int>(lit));
      }
    }
  }
  if (!cur.empty()) r.fail("last clause is not terminated by 0");
  if (f.clauses.size() != m)
    throw Error("dimacs: header declares " + std::to_string(m) + " clauses, found " +
                std::to_string(f.clauses.size()));
  f.validate();
  return f;
}

void write_dimacs(std::ostream& out, const Cnf& f) {
  out << "p cnf " << f.num_vars << " " << f.clauses.size() << "\n";
  for (const auto& c : f.clauses) {
    for (int lit : c) out << lit << " ";
    out << "0\n";
  }
}

LinSystemFq read_lin(std::istream& in) {
  detail::LineReader r(in);
  std::vector<std::string> t;
  if (!r.next(t) || t.size() != 6 || t[0] != "p" || t[1] != "lin")
    r.fail("expected 'p lin n m q d'");
  LinSystemFq sys;
  sys.n = detail::to_size(r, t[2]);
  const std::size_t m = detail::to_size(r, t[3]);
  sys.q = detail::to_long(r, t[4]);
  sys.d = detail::to_size(r, t[5]);
  if (!is_prime(sys.q)) r.fail("modulus is not prime");
  while (r.next(t)) {
    if (t.size() < 2 || t[t.size() - 2] != "=" || (t.size() - 2) % 2 != 0)
      r.fail("expected 'c1 v1 c2 v2 ... = b'");
    std::vector<std::pair<std::size_t, long>> terms;
    for (std::size_t k = 0; k + 2 < t.size(); k += 2) {
      long c = mod(detail::to_long(r, t[k]), sys.q);
      std::size_t v = detail::to_size(r, t[k + 1]);
      if (v == 0 || v > sys.n) r.fail("variable index out of range");
      if (c == 0) r.fail("coefficient is zero mod q");
      terms.emplace_back(v - 1, c);
    }
    std::sort(terms.begin(), terms.end());
    Equation e;
    for (auto [v, c] : terms) {
      if (!e.vars.empty() && e.vars.back() == v) r.fail("variable repeated in equation");
      e.vars.push_back(v);
      e.coeffs.push_back(c);
    }
    e.rhs = mod(detail::to_long(r, t.back()), sys.q);
    sys.equations.push_back(std::move(e));
  }
  if (sys.m() != m)
    throw Error("lin: header declares " + std::to_string(m) + " equations, found " +
                std::to_string(sys.m()));
  sys.validate();
  return sys;
}

void write_lin(std::ostream& out, const LinSystemFq& sys) {
  out << "p lin " << sys.n << " " << sys.m() << " " << sys.q << " " << sys.d << "\n";
  for (const auto& e : sys.equations) {
    for (std::size_t k = 0; k < e.vars.size(); ++k)
      out << e.coeffs[k] << " " << e.vars[k] + 1 << " ";
    out << "= " << e.rhs << "\n";
  }
}

Graph read_graph(std::istream& in) {
  detail::LineReader r(in);
  std::vector<std::string> t;
  if (!r.next(t) || t.size() != 4 || t[0] != "p" || t[1] != "graph")
    r.fail("expected 'p graph n m'");
  Graph g;
  g.n = detail::to_size(r, t[2]);
  const std::size_t m = detail::to_size(r, t[3]);
  g.labels.assign(g.n, 0);  // unlabelled vertices default to 0
  while (r.next(t)) {
    if (t[0] == "l") {
      if (t.size() != 3) r.fail("expected 'l v b'");
      std::size_t v = detail::to_size(r, t[1]);
      if (v == 0 || v > g.n) r.fail("vertex out of range");
      long b = detail::to_long(r, t[2]);
      if (b != 0 && b != 1) r.fail("label must be 0 or 1");
      g.labels[v - 1] = static_cast<int>(b);
    } else {
      if (t.size() != 2) r.fail("expected 'u v'");
      std::size_t u = detail::to_size(r, t[0]), v = detail::to_size(r, t[1]);
      if (u == 0 || v == 0 || u > g.n || v > g.n) r.fail("vertex out of range");
      g.edges.emplace_back(u - 1, v - 1);
    }
  }
  if (g.edges.size() != m)
    throw Error("graph: header declares " + std::to_string(m) + " edges, found " +
                std::to_string(g.edges.size()));
  g.validate();
  return g;
}

void write_graph(std::ostream& out, const Graph& g) {
  out << "p graph " << g.n << " " << g.edges.size() << "\n";
  for (auto [u, v] : g.edges) out << u + 1 << " " << v + 1 << "\n";
  for (std::size_t v = 0; v < g.n; ++v) out << "l " << v + 1 << " " << g.labels[v] << "\n";
}

Polytope read_poly(std::istream& in) {
  detail::LineReader r(in);
  std::vector<std::string> t;
  if (!r.next(t) || t.size() != 4 || t[0] != "p" || t[1] != "poly") r.fail("expected 'p poly n m'");
  const std::size_t n = detail::to_size(r, t[2]);
  const std::size_t m = detail::to_size(r, t[3]);
  Polytope p(n);
  while (r.next(t)) {
    if (t.size() != n + 2 || t[n] != ">=") r.fail("expected n coefficients, '>=', rhs");
    IntVec c(n);
    for (std::size_t k = 0; k < n; ++k)
      if (!detail::parse_integer(t[k], c[k])) r.fail("bad coefficient '" + t[k] + "'");
    Rational rhs;
    if (!detail::parse_rational(t[n + 1], rhs)) r.fail("bad right-hand side '" + t[n + 1] + "'");
    p.add(LinIneq(std::move(c), rhs));
  }
  if (p.size() != m)
    throw Error("poly: header declares " + std::to_string(m) + " rows, found " + std::to_string(p.size()));
  return p;
}

void write_poly(std::ostream& out, const Polytope& p) {
  out << "p poly " << p.dim << " " << p.size() << "\n";
  for (const auto& row : p.ineqs) {
    for (const auto& c : row.coeffs) out << c << " ";
    out << ">= " << to_string(row.rhs) << "\n";
  }
}

}  // namespace cpsp
