#include "cpsp/refuter.hpp"

#include <functional>
#include <sstream>

#include "cpsp/lp.hpp"

namespace cpsp {

namespace {

long mod(const Integer& z, long q) {
  Integer r = z % q;
  if (r < 0) r += q;
  return r.get_si();
}

std::string index_list(const std::vector<std::size_t>& s) {
  std::string out = "[";
  for (std::size_t k = 0; k < s.size(); ++k) out += (k ? "," : "") + std::to_string(s[k] + 1);
  return out + "]";
}

class Refuter {
 public:
  Refuter(const LinSystemFq& sys, const RefuteOptions& opts)
      : sys_(sys), opts_(opts), alpha_(minimal_certificate(sys)) {
    proof_.axioms = to_polytope(to_cnf(sys));
    cur_ = proof_.axioms;
    for (std::size_t i = 0; i < sys.m(); ++i) forms_.push_back(equation_form(sys, i));
    for (std::size_t i = 0; i < sys.m(); ++i)
      if (alpha_[i] != 0) support_.push_back(i);
  }

  SpProof run() {
    proof_.root = guarded([&] { return root(); });
    return std::move(proof_);
  }

 private:
  using Build = std::function<std::size_t()>;
  using Cont = std::function<std::size_t(const Integer&)>;

  const LinSystemFq& sys_;
  RefuteOptions opts_;
  std::vector<long> alpha_;
  std::vector<IntVec> forms_;
  std::vector<std::size_t> support_;
  SpProof proof_;
  Polytope cur_;
  std::vector<LinIneq> path_;

  std::size_t dim() const { return proof_.dim(); }

  void note(const std::string& line) {
    if (opts_.transcript) opts_.transcript->push_back(line);
  }

  std::size_t leaf() { return proof_.add_leaf(leaf_certificate(proof_.axioms, path_)); }

  // Every node first checks its polytope; empty ones close immediately.
  std::size_t guarded(const Build& body) {
    if (lp_feasibility(cur_).infeasible()) return leaf();
    return body();
  }

  // A node that the construction expects to be empty.
  std::size_t must_close(const char* what) {
    if (!lp_feasibility(cur_).infeasible())
      throw Error(std::string("refute_sp: internal error: ") + what + " left a nonempty polytope");
    return leaf();
  }

  std::size_t descend(const LinIneq& e, const Build& body) {
    path_.push_back(e);
    cur_.add(e);
    std::size_t id = guarded(body);
    cur_.ineqs.pop_back();
    path_.pop_back();
    return id;
  }

  std::size_t query(const IntVec& a, const Integer& b, const Build& left, const Build& right) {
    std::size_t l = descend(left_edge(a, b), left);
    std::size_t r = descend(right_edge(a, b), right);
    return proof_.add_query(a, b, l, r);
  }

  IntVec weighted_sum(const std::vector<std::size_t>& idx) const {
    IntVec s = zeros(dim());
    for (std::size_t i : idx) s = add(s, scale(forms_[i], alpha_[i]));
    return s;
  }

  long weighted_rhs(const std::vector<std::size_t>& idx) const {
    long r = 0;
    for (std::size_t i : idx) r = (r + alpha_[i] * sys_.equations[i].rhs) % sys_.q;
    return r;
  }

  // Queries the integer value of s over the current polytope; thresholds
  // t = floor(min)+1 .. floor(max)+1 split the line into slots, slot k
  // holding the single value floor(min)+k.  cont runs with s pinned.
  std::size_t value_chain(const IntVec& s, const Cont& cont) {
    LpResult lo = lp_optimum(cur_, s, Direction::Minimize);
    LpResult hi = lp_optimum(cur_, s, Direction::Maximize);
    if (!lo.optimal() || !hi.optimal()) throw Error("refute_sp: internal error: unbounded form");
    const Integer base = floor_div(lo.value);
    const Integer slots = floor_div(hi.value) - base + 2;
    std::function<std::size_t(Integer, Integer)> span = [&](Integer u, Integer w) -> std::size_t {
      if (u == w) return cont(base + u);
      Integer m = opts_.mode == ChainMode::Ascending ? Integer(u + 1) : Integer((u + w + 1) / 2);
      return query(s, base + m, [&] { return span(u, m - 1); }, [&] { return span(m, w); });
    };
    return span(0, slots - 1);
  }

  std::size_t root() {
    const IntVec s = weighted_sum(support_);
    return value_chain(s, [&](const Integer& k) {
      if (mod(k, sys_.q) != 0) {
        note("root k=" + k.get_str() + " not divisible by q: close");
        return divide_query(s, k);
      }
      return round(support_, k, 0);
    });
  }

  // s/q is integral; pinning s = k with q not dividing k leaves no room
  // on either side of the query s/q vs ceil(k/q).
  std::size_t divide_query(const IntVec& s, const Integer& k) {
    IntVec t(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (mod(s[j], sys_.q) != 0) throw Error("refute_sp: internal error: form not divisible by q");
      t[j] = s[j] / sys_.q;
    }
    Integer c = ceil_div(Rational(k, sys_.q));
    return query(t, c, [&] { return must_close("divide query"); },
                 [&] { return must_close("divide query"); });
  }

  // Invariant: path pins sum_{i in I} alpha_i f_i = k and
  // k != sum_{i in I} alpha_i b_i (mod q).
  std::size_t round(const std::vector<std::size_t>& idx, const Integer& k, std::size_t level) {
    if (mod(k - weighted_rhs(idx), sys_.q) == 0)
      throw Error("refute_sp: internal error: round invariant violated");
    if (idx.size() == 1) {
      note("round " + std::to_string(level) + " I=" + index_list(idx) + " k=" + k.get_str() +
           " close by bits");
      return close_bits(idx[0], 0);
    }
    const std::size_t half = (idx.size() + 1) / 2;
    std::vector<std::size_t> i1(idx.begin(), idx.begin() + half), i2(idx.begin() + half, idx.end());
    const IntVec s1 = weighted_sum(i1), s2 = weighted_sum(i2);
    return value_chain(s1, [&](const Integer& a) {
      return value_chain(s2, [&](const Integer& b) {
        std::string head = "round " + std::to_string(level) + " I=" + index_list(idx) +
                           " k=" + k.get_str() + " split=" + index_list(i1) + "|" +
                           index_list(i2) + " a=" + a.get_str() + " b=" + b.get_str();
        if (mod(a - weighted_rhs(i1), sys_.q) != 0) {
          note(head + " next=I1");
          return round(i1, a, level + 1);
        }
        if (mod(b - weighted_rhs(i2), sys_.q) != 0) {
          note(head + " next=I2");
          return round(i2, b, level + 1);
        }
        note(head + " close by LP");
        return must_close("inconsistent split");
      });
    });
  }

  // Fix every bit of equation i in turn; with all of them fixed a clause of
  // the encoding (or the pinned value) is violated.
  std::size_t close_bits(std::size_t i, std::size_t pos) {
    const Equation& e = sys_.equations[i];
    const std::size_t B = bits_per_var(sys_.q);
    if (pos == e.width() * B) return must_close("bit enumeration");
    const std::size_t bit = e.vars[pos / B] * B + pos % B;
    const IntVec a = unit(dim(), bit);
    Build next = [&] { return close_bits(i, pos + 1); };
    return query(a, 1, next, next);
  }
};

}  // namespace

std::vector<long> minimal_certificate(const LinSystemFq& sys) {
  sys.validate();
  if (!is_prime(sys.q)) throw Error("refute_sp: q must be prime");
  auto solve = [&](const std::vector<std::size_t>& rows) {
    std::vector<std::vector<long>> a;
    std::vector<long> b;
    const auto full = sys.matrix();
    for (std::size_t i : rows) {
      a.push_back(full[i]);
      b.push_back(sys.equations[i].rhs);
    }
    return solve_mod_p(a, b, sys.q);
  };
  std::vector<std::size_t> rows(sys.m());
  for (std::size_t i = 0; i < sys.m(); ++i) rows[i] = i;
  ModPResult r = solve(rows);
  if (auto* sol = std::get_if<ModPSolution>(&r)) {
    std::ostringstream w;
    for (std::size_t j = 0; j < sol->x.size(); ++j) w << (j ? " " : "") << sol->x[j];
    throw Error("refute_sp: system is satisfiable, witness x = " + w.str());
  }
  std::vector<long> alpha(sys.m(), 0);
  auto adopt = [&](const std::vector<std::size_t>& sub, const std::vector<long>& cert) {
    std::fill(alpha.begin(), alpha.end(), 0);
    for (std::size_t k = 0; k < sub.size(); ++k) alpha[sub[k]] = cert[k];
  };
  adopt(rows, std::get<ModPCertificate>(r).alpha);
  // Drop one support row at a time while the rest stays unsatisfiable.
  for (bool shrunk = true; shrunk;) {
    shrunk = false;
    std::vector<std::size_t> supp;
    for (std::size_t i = 0; i < sys.m(); ++i)
      if (alpha[i] != 0) supp.push_back(i);
    for (std::size_t drop = 0; drop < supp.size() && !shrunk; ++drop) {
      std::vector<std::size_t> sub;
      for (std::size_t k = 0; k < supp.size(); ++k)
        if (k != drop) sub.push_back(supp[k]);
      ModPResult s = solve(sub);
      if (auto* c = std::get_if<ModPCertificate>(&s)) {
        adopt(sub, c->alpha);
        shrunk = true;
      }
    }
  }
  return alpha;
}

IntVec equation_form(const LinSystemFq& sys, std::size_t i) {
  const std::size_t B = bits_per_var(sys.q);
  IntVec f = zeros(sys.n * B);
  const Equation& e = sys.equations.at(i);
  for (std::size_t k = 0; k < e.width(); ++k)
    for (std::size_t j = 0; j < B; ++j) f[e.vars[k] * B + j] = Integer(e.coeffs[k]) << j;
  return f;
}

SpProof refute_sp(const LinSystemFq& sys, const RefuteOptions& opts) {
  return Refuter(sys, opts).run();
}

RefuteStats refute_sp_stats(const LinSystemFq& sys) {
  RefuteOptions opts;
  opts.mode = ChainMode::Balanced;
  SpProof p = refute_sp(sys, opts);
  ProofStats s = stats(p);
  return {s.size, s.depth};
}

Integer refute_size_bound(const LinSystemFq& sys) {
  std::vector<long> alpha = minimal_certificate(sys);
  IntVec s = zeros(sys.n * bits_per_var(sys.q));
  std::size_t support = 0;
  for (std::size_t i = 0; i < sys.m(); ++i) {
    if (alpha[i] == 0) continue;
    ++support;
    s = add(s, scale(equation_form(sys, i), alpha[i]));
  }
  Integer c = 2;
  for (const auto& v : s) c += abs(v);
  std::size_t rounds = 1;
  while ((std::size_t{1} << (rounds - 1)) < support) ++rounds;
  Integer bound;
  mpz_pow_ui(bound.get_mpz_t(), c.get_mpz_t(), 2 * rounds);
  const std::size_t B = bits_per_var(sys.q);
  return bound * (Integer(1) << (sys.d * B + 1));
}

}  // namespace cpsp
