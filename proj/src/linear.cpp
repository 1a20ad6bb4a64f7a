#include "cpsp/linear.hpp"

#include <sstream>

namespace cpsp {

Integer floor_div(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil_div(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

bool is_integral(const Rational& q) { return q.get_den() == 1; }

Integer gcd_of(const IntVec& v) {
  Integer g = 0;
  for (const auto& x : v) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  }
  return g;
}

std::size_t bit_length(const Integer& z) {
  if (z == 0) return 0;
  return mpz_sizeinbase(z.get_mpz_t(), 2);
}

Rational dot(const IntVec& a, const RatVec& x) {
  if (a.size() != x.size()) throw Error("dot: dimension mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != 0 && x[i] != 0) s += Rational(a[i]) * x[i];
  }
  return s;
}

Rational dot(const RatVec& a, const RatVec& x) {
  if (a.size() != x.size()) throw Error("dot: dimension mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
  return s;
}

Integer dot(const IntVec& a, const IntVec& x) {
  if (a.size() != x.size()) throw Error("dot: dimension mismatch");
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
  return s;
}

IntVec zeros(std::size_t n) { return IntVec(n, Integer(0)); }

IntVec unit(std::size_t n, std::size_t i, long value) {
  IntVec v = zeros(n);
  v.at(i) = value;
  return v;
}

IntVec negate(const IntVec& v) {
  IntVec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = -v[i];
  return r;
}

IntVec add(const IntVec& a, const IntVec& b) {
  if (a.size() != b.size()) throw Error("add: dimension mismatch");
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

IntVec scale(const IntVec& a, const Integer& s) {
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

bool is_zero(const IntVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

LinIneq LinIneq::at_most(const IntVec& c, const Rational& r) {
  return LinIneq(negate(c), -r);
}

LinIneq LinIneq::contradiction(std::size_t n) { return LinIneq(zeros(n), 1); }

LinIneq LinIneq::trivial(std::size_t n) { return LinIneq(zeros(n), 0); }

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_str();
}

std::ostream& operator<<(std::ostream& os, const LinIneq& ineq) {
  bool first = true;
  for (std::size_t i = 0; i < ineq.coeffs.size(); ++i) {
    const auto& c = ineq.coeffs[i];
    if (c == 0) continue;
    if (!first) os << (c > 0 ? " + " : " - ");
    else if (c < 0) os << "-";
    Integer mag = abs(c);
    if (mag != 1) os << mag;
    os << "x" << (i + 1);
    first = false;
  }
  if (first) os << "0";
  return os << " >= " << to_string(ineq.rhs);
}

Polytope::Polytope(std::size_t n, std::vector<LinIneq> rows) : dim(n), ineqs(std::move(rows)) {
  for (const auto& r : ineqs)
    if (r.dim() != dim) throw Error("polytope: inequality dimension mismatch");
}

void Polytope::add(LinIneq ineq) {
  if (ineq.dim() != dim) throw Error("polytope: inequality dimension mismatch");
  ineqs.push_back(std::move(ineq));
}

bool Polytope::contains(const RatVec& x) const {
  // Scale x to integers X / den and compare a.X >= rhs * den.
  Integer den = 1;
  for (const auto& v : x) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
  IntVec X(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) X[i] = x[i].get_num() * (den / x[i].get_den());
  Integer acc;
  for (const auto& r : ineqs) {
    if (r.dim() != x.size()) throw Error("contains: dimension mismatch");
    acc = 0;
    for (std::size_t i = 0; i < X.size(); ++i)
      if (r.coeffs[i] != 0 && X[i] != 0) mpz_addmul(acc.get_mpz_t(), r.coeffs[i].get_mpz_t(), X[i].get_mpz_t());
    if (acc * r.rhs.get_den() < r.rhs.get_num() * den) return false;
  }
  return true;
}

bool Polytope::contains(const IntVec& x) const {
  for (const auto& r : ineqs)
    if (!r.satisfied_by(x)) return false;
  return true;
}

Polytope Polytope::with(const LinIneq& extra) const {
  Polytope p = *this;
  p.add(extra);
  return p;
}

}  // namespace cpsp
