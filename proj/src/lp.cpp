#include "cpsp/lp.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace cpsp {
namespace {

// maximize costs.y  s.t.  sum_j y_j * columns[j] = rhs,  y >= 0
struct StandardForm {
  const std::vector<const IntVec*>* columns;  // each of length rows
  RatVec costs;
  RatVec rhs;
  std::size_t rows;
};

enum class SimplexOutcome { Optimal, Unbounded, Infeasible };

struct SimplexResult {
  SimplexOutcome outcome;
  RatVec y;    // primal values of the standard form
  RatVec pi;   // simplex multipliers (a dual solution) on Optimal
  RatVec ray;  // improving ray on Unbounded
};

class RevisedSimplex {
 public:
  explicit RevisedSimplex(const StandardForm& lp)
      : lp_(lp), n_(lp.rows), m_(lp.columns->size()), sign_(n_, 1) {
    for (std::size_t i = 0; i < n_; ++i)
      if (lp_.rhs[i] < 0) sign_[i] = -1;
    binv_.assign(n_, RatVec(n_, Rational(0)));
    for (std::size_t i = 0; i < n_; ++i) binv_[i][i] = 1;
    basis_.resize(n_);
    xb_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      basis_[i] = m_ + i;
      xb_[i] = lp_.rhs[i] * sign_[i];
    }
    is_basic_.assign(m_ + n_, false);
    for (std::size_t i = 0; i < n_; ++i) is_basic_[m_ + i] = true;
  }

  // Replaces the all-artificial start by the given basis when it is
  // nonsingular and primal feasible; otherwise leaves the start untouched.
  bool warm_start(const std::vector<std::size_t>& basis) {
    if (basis.size() != n_) return false;
    // Gauss-Jordan on [B | I].
    std::vector<RatVec> b(n_, RatVec(n_)), inv(n_, RatVec(n_, Rational(0)));
    for (std::size_t i = 0; i < n_; ++i) {
      inv[i][i] = 1;
      for (std::size_t k = 0; k < n_; ++k) b[i][k] = entry(i, basis[k]);
    }
    for (std::size_t c = 0; c < n_; ++c) {
      std::size_t r = c;
      while (r < n_ && b[r][c] == 0) ++r;
      if (r == n_) return false;
      std::swap(b[r], b[c]);
      std::swap(inv[r], inv[c]);
      const Rational piv = b[c][c];
      for (std::size_t k = 0; k < n_; ++k) {
        b[c][k] /= piv;
        inv[c][k] /= piv;
      }
      for (std::size_t i = 0; i < n_; ++i) {
        if (i == c || b[i][c] == 0) continue;
        const Rational f = b[i][c];
        for (std::size_t k = 0; k < n_; ++k) {
          if (b[c][k] != 0) b[i][k] -= f * b[c][k];
          if (inv[c][k] != 0) inv[i][k] -= f * inv[c][k];
        }
      }
    }
    RatVec xb(n_, Rational(0));
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t k = 0; k < n_; ++k)
        if (inv[i][k] != 0) xb[i] += inv[i][k] * lp_.rhs[k] * sign_[k];
      if (xb[i] < 0) return false;
    }
    binv_ = std::move(inv);
    xb_ = std::move(xb);
    is_basic_.assign(m_ + n_, false);
    basis_ = basis;
    for (std::size_t j : basis_) is_basic_[j] = true;
    return true;
  }

  SimplexResult run() {
    // Phase 1: maximize -sum(artificials).
    phase_ = 1;
    auto p1 = iterate();
    assert(p1 == SimplexOutcome::Optimal);
    (void)p1;
    for (std::size_t i = 0; i < n_; ++i) {
      if (basis_[i] >= m_ && xb_[i] != 0) return {SimplexOutcome::Infeasible, {}, {}, {}};
    }
    drive_out_artificials();

    phase_ = 2;
    auto p2 = iterate();
    SimplexResult res;
    res.outcome = p2;
    if (p2 == SimplexOutcome::Unbounded) {
      res.ray.assign(m_, Rational(0));
      res.ray[entering_] = 1;
      for (std::size_t i = 0; i < n_; ++i)
        if (basis_[i] < m_) res.ray[basis_[i]] = -direction_[i];
      return res;
    }
    res.y.assign(m_, Rational(0));
    for (std::size_t i = 0; i < n_; ++i)
      if (basis_[i] < m_) res.y[basis_[i]] = xb_[i];
    auto pi = multipliers();
    res.pi.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) res.pi[i] = pi[i] * sign_[i];
    return res;
  }

 private:
  Rational cost(std::size_t j) const {
    if (j >= m_) return phase_ == 1 ? Rational(-1) : Rational(0);
    return phase_ == 1 ? Rational(0) : lp_.costs[j];
  }

  // Column j of the sign-adjusted constraint matrix.
  Rational entry(std::size_t i, std::size_t j) const {
    if (j >= m_) return (j - m_ == i) ? Rational(1) : Rational(0);
    const Integer& v = (*(*lp_.columns)[j])[i];
    return sign_[i] > 0 ? Rational(v) : Rational(-v);
  }

  RatVec multipliers() const {
    RatVec pi(n_, Rational(0));
    for (std::size_t i = 0; i < n_; ++i) {
      Rational cb = cost(basis_[i]);
      if (cb == 0) continue;
      for (std::size_t k = 0; k < n_; ++k)
        if (binv_[i][k] != 0) pi[k] += cb * binv_[i][k];
    }
    return pi;
  }

  RatVec column_direction(std::size_t j) const {
    RatVec u(n_, Rational(0));
    if (j >= m_) {
      std::size_t c = j - m_;
      for (std::size_t i = 0; i < n_; ++i) u[i] = binv_[i][c];
      return u;
    }
    const IntVec& col = (*(*lp_.columns)[j]);
    for (std::size_t k = 0; k < n_; ++k) {
      if (col[k] == 0) continue;
      Rational v = sign_[k] > 0 ? Rational(col[k]) : Rational(-col[k]);
      for (std::size_t i = 0; i < n_; ++i)
        if (binv_[i][k] != 0) u[i] += binv_[i][k] * v;
    }
    return u;
  }

  void pivot(std::size_t r, std::size_t j, const RatVec& u) {
    Rational piv = u[r];
    for (auto& v : binv_[r]) v /= piv;
    xb_[r] /= piv;
    for (std::size_t i = 0; i < n_; ++i) {
      if (i == r || u[i] == 0) continue;
      const Rational f = u[i];
      for (std::size_t k = 0; k < n_; ++k)
        if (binv_[r][k] != 0) binv_[i][k] -= f * binv_[r][k];
      xb_[i] -= f * xb_[r];
    }
    is_basic_[basis_[r]] = false;
    basis_[r] = j;
    is_basic_[j] = true;
  }

  SimplexOutcome iterate() {
    while (true) {
      // pi = P / den with integer P, so the reduced cost of column j is
      // positive iff cost_j * den > sum_i P_i a_ij.
      RatVec pi = multipliers();
      Integer den = 1;
      for (const auto& v : pi) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
      IntVec P(n_);
      for (std::size_t i = 0; i < n_; ++i) {
        P[i] = pi[i].get_num() * (den / pi[i].get_den());
        if (sign_[i] < 0) P[i] = -P[i];
      }
      // Bland: lowest-index improving column.  Artificials never re-enter.
      std::optional<std::size_t> enter;
      Integer acc, lhs;
      for (std::size_t j = 0; j < m_; ++j) {
        if (is_basic_[j]) continue;
        const Rational c = cost(j);
        const IntVec& col = (*(*lp_.columns)[j]);
        acc = 0;
        for (std::size_t i = 0; i < n_; ++i)
          if (P[i] != 0 && col[i] != 0) mpz_addmul(acc.get_mpz_t(), P[i].get_mpz_t(), col[i].get_mpz_t());
        acc *= c.get_den();
        lhs = c.get_num() * den;
        if (lhs > acc) {
          enter = j;
          break;
        }
      }
      if (!enter) return SimplexOutcome::Optimal;
      RatVec u = column_direction(*enter);
      std::optional<std::size_t> leave;
      Rational best;
      for (std::size_t i = 0; i < n_; ++i) {
        if (u[i] <= 0) continue;
        Rational ratio = xb_[i] / u[i];
        if (!leave || ratio < best || (ratio == best && basis_[i] < basis_[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) {
        entering_ = *enter;
        direction_ = std::move(u);
        return SimplexOutcome::Unbounded;
      }
      pivot(*leave, *enter, u);
    }
  }

  void drive_out_artificials() {
    for (std::size_t r = 0; r < n_; ++r) {
      if (basis_[r] < m_) continue;
      for (std::size_t j = 0; j < m_; ++j) {
        if (is_basic_[j]) continue;
        RatVec u = column_direction(j);
        if (u[r] != 0) {
          pivot(r, j, u);
          break;
        }
      }
      // Otherwise the row is redundant; its artificial stays basic at zero.
    }
  }

  const StandardForm& lp_;
  std::size_t n_, m_;
  std::vector<int> sign_;
  std::vector<RatVec> binv_;
  std::vector<std::size_t> basis_;
  RatVec xb_;
  std::vector<bool> is_basic_;
  int phase_ = 1;
  std::size_t entering_ = 0;
  RatVec direction_;
};

// Floating-point run of the same two-phase method with Dantzig pricing.
// Only its final basis is used, as a warm start for the exact solver.
std::vector<std::size_t> float_basis(const StandardForm& lp) {
  const std::size_t n = lp.rows, m = lp.columns->size(), w = m + n;
  std::vector<std::vector<double>> t(n, std::vector<double>(w, 0.0));
  std::vector<double> xb(n);
  std::vector<std::size_t> basis(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = lp.rhs[i] < 0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < m; ++j) t[i][j] = s * (*(*lp.columns)[j])[i].get_d();
    t[i][m + i] = 1.0;
    xb[i] = s * lp.rhs[i].get_d();
    basis[i] = m + i;
  }
  std::vector<double> costs(m), colscale(w, 1.0);
  for (std::size_t j = 0; j < m; ++j) costs[j] = lp.costs[j].get_d();
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < n; ++i) colscale[j] = std::max(colscale[j], std::abs(t[i][j]));
  constexpr double eps = 1e-9;
  const std::size_t limit = 20 * w + 100;
  std::vector<double> rc(w);
  for (int phase = 1; phase <= 2; ++phase) {
    auto cost = [&](std::size_t j) {
      if (j >= m) return phase == 1 ? -1.0 : 0.0;
      return phase == 1 ? 0.0 : costs[j];
    };
    // Reduced-cost row, updated with every pivot.
    for (std::size_t j = 0; j < w; ++j) {
      rc[j] = cost(j);
      for (std::size_t i = 0; i < n; ++i)
        if (t[i][j] != 0.0) rc[j] -= cost(basis[i]) * t[i][j];
    }
    // Long runs of degenerate pivots switch pricing to Bland's rule.
    std::size_t degenerate = 0;
    for (std::size_t iter = 0;; ++iter) {
      if (iter > limit) return basis;
      const bool bland = degenerate > 2 * n + 10;
      std::size_t enter = w;
      double best = eps;
      for (std::size_t j = 0; j < (phase == 1 ? w : m); ++j) {
        if (rc[j] / colscale[j] > best) {
          best = rc[j] / colscale[j];
          enter = j;
          if (bland) break;
        }
      }
      if (enter == w) break;
      std::size_t leave = n;
      double ratio = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (t[i][enter] <= eps) continue;
        double r = xb[i] / t[i][enter];
        if (leave == n || r < ratio - eps || (r <= ratio + eps && basis[i] < basis[leave])) {
          leave = i;
          ratio = r;
        }
      }
      if (leave == n) return basis;
      degenerate = ratio <= eps ? degenerate + 1 : 0;
      const double piv = t[leave][enter];
      for (auto& v : t[leave]) v /= piv;
      xb[leave] /= piv;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == leave || t[i][enter] == 0.0) continue;
        const double f = t[i][enter];
        for (std::size_t k = 0; k < w; ++k) t[i][k] -= f * t[leave][k];
        xb[i] -= f * xb[leave];
        if (std::abs(xb[i]) < eps) xb[i] = 0.0;
      }
      const double f = rc[enter];
      for (std::size_t k = 0; k < w; ++k) rc[k] -= f * t[leave][k];
      basis[leave] = enter;
    }
  }
  return basis;
}

SimplexResult solve(const StandardForm& lp) {
  RevisedSimplex s(lp);
  s.warm_start(float_basis(lp));
  return s.run();
}

RatVec normalized_certificate(const Polytope& p, const RatVec& y) {
  Rational total = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i] != 0) total += y[i] * p.ineqs[i].rhs;
  assert(total > 0);
  RatVec out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] / total;
  return out;
}

LpResult infeasibility_or_unbounded(const Polytope& p, const std::vector<const IntVec*>& cols) {
  // max rhs.y  s.t.  A^T y = 0,  sum y + s = 1.
  const std::size_t n = p.dim;
  std::vector<IntVec> ext;
  ext.reserve(cols.size() + 1);
  for (const IntVec* c : cols) {
    IntVec e = *c;
    e.push_back(1);
    ext.push_back(std::move(e));
  }
  IntVec slack = zeros(n + 1);
  slack[n] = 1;
  ext.push_back(slack);
  std::vector<const IntVec*> ptrs;
  for (const auto& e : ext) ptrs.push_back(&e);
  StandardForm sf{&ptrs, {}, RatVec(n + 1, Rational(0)), n + 1};
  sf.rhs[n] = 1;
  sf.costs.reserve(ext.size());
  for (const auto& row : p.ineqs) sf.costs.push_back(row.rhs);
  sf.costs.push_back(0);
  auto res = solve(sf);
  assert(res.outcome == SimplexOutcome::Optimal);
  LpResult out;
  Rational value = 0;
  for (std::size_t i = 0; i < p.size(); ++i) value += res.y[i] * p.ineqs[i].rhs;
  if (value > 0) {
    out.status = LpStatus::Infeasible;
    RatVec y(res.y.begin(), res.y.begin() + static_cast<std::ptrdiff_t>(p.size()));
    out.dual = normalized_certificate(p, y);
  } else {
    out.status = LpStatus::Unbounded;
  }
  return out;
}

}  // namespace

RationalCombination combine(const std::vector<LinIneq>& ineqs, const RatVec& multipliers,
                            std::size_t dim) {
  if (ineqs.size() != multipliers.size()) throw Error("combine: length mismatch");
  RationalCombination c{RatVec(dim, Rational(0)), Rational(0)};
  for (std::size_t i = 0; i < ineqs.size(); ++i) {
    const Rational& w = multipliers[i];
    if (w == 0) continue;
    if (ineqs[i].dim() != dim) throw Error("combine: dimension mismatch");
    for (std::size_t k = 0; k < dim; ++k)
      if (ineqs[i].coeffs[k] != 0) c.coeffs[k] += w * ineqs[i].coeffs[k];
    c.rhs += w * ineqs[i].rhs;
  }
  return c;
}

bool farkas_check(const std::vector<LinIneq>& ineqs, const RatVec& multipliers,
                  const LinIneq& target) {
  if (ineqs.size() != multipliers.size()) throw Error("farkas_check: length mismatch");
  for (const auto& w : multipliers)
    if (w < 0) return false;
  for (const auto& row : ineqs)
    if (row.dim() != target.dim()) return false;
  auto sum = combine(ineqs, multipliers, target.dim());
  for (std::size_t k = 0; k < target.dim(); ++k)
    if (sum.coeffs[k] != target.coeffs[k]) return false;
  return sum.rhs >= target.rhs;
}

LpResult lp_optimum(const Polytope& p, const IntVec& objective, Direction dir) {
  if (objective.size() != p.dim) throw Error("lp_optimum: dimension mismatch");
  for (const auto& row : p.ineqs)
    if (row.dim() != p.dim) throw Error("lp_optimum: dimension mismatch");

  const IntVec obj = dir == Direction::Minimize ? objective : negate(objective);
  std::vector<const IntVec*> cols;
  cols.reserve(p.size());
  for (const auto& row : p.ineqs) cols.push_back(&row.coeffs);

  StandardForm sf{&cols, {}, {}, p.dim};
  sf.costs.reserve(p.size());
  for (const auto& row : p.ineqs) sf.costs.push_back(row.rhs);
  sf.rhs.reserve(p.dim);
  for (const auto& c : obj) sf.rhs.emplace_back(c);

  auto res = solve(sf);
  LpResult out;
  switch (res.outcome) {
    case SimplexOutcome::Optimal: {
      out.status = LpStatus::Optimal;
      out.dual = res.y;
      out.witness = res.pi;
      Rational v = 0;
      for (std::size_t i = 0; i < p.size(); ++i)
        if (res.y[i] != 0) v += res.y[i] * p.ineqs[i].rhs;
      out.value = dir == Direction::Minimize ? v : Rational(-v);
      break;
    }
    case SimplexOutcome::Unbounded:
      out.status = LpStatus::Infeasible;
      out.dual = normalized_certificate(p, res.ray);
      break;
    case SimplexOutcome::Infeasible:
      out = infeasibility_or_unbounded(p, cols);
      break;
  }

  // Exact post-conditions.
  if (out.status == LpStatus::Optimal) {
    if (!p.contains(out.witness)) throw Error("lp_optimum: internal error (witness)");
    Rational wv = dot(objective, out.witness);
    if (wv != out.value) throw Error("lp_optimum: internal error (value)");
    Rational bound = dir == Direction::Minimize ? out.value : Rational(-out.value);
    if (!farkas_check(p.ineqs, out.dual, LinIneq(obj, bound)))
      throw Error("lp_optimum: internal error (dual)");
  } else if (out.status == LpStatus::Infeasible) {
    if (!farkas_check(p.ineqs, out.dual, LinIneq::contradiction(p.dim)))
      throw Error("lp_optimum: internal error (infeasibility certificate)");
  }
  return out;
}

LpResult lp_feasibility(const Polytope& p) {
  return lp_optimum(p, zeros(p.dim), Direction::Minimize);
}

std::optional<RatVec> nullspace_vector(const std::vector<RatVec>& rows, std::size_t n) {
  std::vector<RatVec> m;
  for (const auto& r : rows) {
    if (r.size() != n) throw Error("nullspace_vector: dimension mismatch");
    m.push_back(r);
  }
  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < m.size(); ++col) {
    std::size_t sel = rank;
    while (sel < m.size() && m[sel][col] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[sel], m[rank]);
    Rational piv = m[rank][col];
    for (auto& v : m[rank]) v /= piv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == rank || m[i][col] == 0) continue;
      Rational f = m[i][col];
      for (std::size_t k = 0; k < n; ++k) m[i][k] -= f * m[rank][k];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  if (rank == n) return std::nullopt;
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivot_col) is_pivot[c] = true;
  std::size_t free_col = 0;
  while (is_pivot[free_col]) ++free_col;
  RatVec v(n, Rational(0));
  v[free_col] = 1;
  for (std::size_t r = 0; r < rank; ++r) v[pivot_col[r]] = -m[r][free_col];
  return v;
}

std::optional<RatVec> nullspace_vector(const std::vector<IntVec>& rows, std::size_t n) {
  std::vector<RatVec> r;
  r.reserve(rows.size());
  for (const auto& row : rows) r.emplace_back(row.begin(), row.end());
  return nullspace_vector(r, n);
}

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

namespace {
long mod(long a, long p) {
  a %= p;
  return a < 0 ? a + p : a;
}
long inverse_mod(long a, long p) {
  long r = 1, base = mod(a, p), e = p - 2;
  while (e > 0) {
    if (e & 1) r = r * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return r;
}
}  // namespace

ModPResult solve_mod_p(const std::vector<std::vector<long>>& a, const std::vector<long>& b,
                       long p) {
  if (!is_prime(p)) throw Error("solve_mod_p: modulus is not prime");
  const std::size_t m = a.size();
  if (b.size() != m) throw Error("solve_mod_p: rhs length mismatch");
  const std::size_t n = m == 0 ? 0 : a[0].size();
  // Each row carries [A | b | combination-of-original-rows].
  std::vector<std::vector<long>> rows(m, std::vector<long>(n + 1 + m, 0));
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i].size() != n) throw Error("solve_mod_p: ragged matrix");
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = mod(a[i][j], p);
    rows[i][n] = mod(b[i], p);
    rows[i][n + 1 + i] = 1;
  }
  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < m; ++col) {
    std::size_t sel = rank;
    while (sel < m && rows[sel][col] == 0) ++sel;
    if (sel == m) continue;
    std::swap(rows[sel], rows[rank]);
    long inv = inverse_mod(rows[rank][col], p);
    for (auto& v : rows[rank]) v = v * inv % p;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == rank || rows[i][col] == 0) continue;
      long f = rows[i][col];
      for (std::size_t k = 0; k < rows[i].size(); ++k)
        rows[i][k] = mod(rows[i][k] - f * rows[rank][k], p);
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (std::size_t i = rank; i < m; ++i) {
    if (rows[i][n] != 0) {
      ModPCertificate cert;
      cert.alpha.assign(rows[i].begin() + static_cast<std::ptrdiff_t>(n + 1), rows[i].end());
      return cert;
    }
  }
  ModPSolution sol;
  sol.x.assign(n, 0);
  for (std::size_t r = 0; r < rank; ++r) sol.x[pivot_col[r]] = rows[r][n];
  return sol;
}

}  // namespace cpsp
