// Exact arithmetic atoms shared by every proof object: integers, rationals,
// integer coefficient vectors, linear inequalities and polytopes.
//
// Inequalities are always stored in the form  coeffs . x >= rhs.  The "<="
// sense exists only at the text I/O boundary.
#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cpsp {

using Integer = mpz_class;
using Rational = mpq_class;

using IntVec = std::vector<Integer>;
using RatVec = std::vector<Rational>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an exhaustive enumeration would exceed its configured budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

Integer ceil_div(const Rational& q);
Integer floor_div(const Rational& q);
inline Integer ceil_of(const Rational& q) { return ceil_div(q); }
inline Integer floor_of(const Rational& q) { return floor_div(q); }
bool is_integral(const Rational& q);

Integer gcd_of(const IntVec& v);
std::size_t bit_length(const Integer& z);  // of |z|; 0 for z == 0

Rational dot(const IntVec& a, const RatVec& x);
Rational dot(const RatVec& a, const RatVec& x);
Integer dot(const IntVec& a, const IntVec& x);

IntVec zeros(std::size_t n);
IntVec unit(std::size_t n, std::size_t i, long value = 1);
IntVec negate(const IntVec& v);
IntVec add(const IntVec& a, const IntVec& b);
IntVec scale(const IntVec& a, const Integer& s);
bool is_zero(const IntVec& v);

// coeffs . x >= rhs
struct LinIneq {
  IntVec coeffs;
  Rational rhs;

  LinIneq() = default;
  LinIneq(IntVec c, Rational r) : coeffs(std::move(c)), rhs(std::move(r)) {}

  std::size_t dim() const { return coeffs.size(); }

  // Build from a "<=" inequality  c . x <= r  (stored as -c . x >= -r).
  static LinIneq at_most(const IntVec& c, const Rational& r);
  // 0 >= 1
  static LinIneq contradiction(std::size_t n);
  // 0 >= 0 (the whole space)
  static LinIneq trivial(std::size_t n);

  bool satisfied_by(const RatVec& x) const { return dot(coeffs, x) >= rhs; }
  bool satisfied_by(const IntVec& x) const { return Rational(dot(coeffs, x)) >= rhs; }

  // 0 >= r with r > 0
  bool is_contradiction() const { return is_zero(coeffs) && rhs > 0; }
  // 0 >= r with r <= 0
  bool is_universal() const { return is_zero(coeffs) && rhs <= 0; }

  friend bool operator==(const LinIneq& a, const LinIneq& b) {
    return a.coeffs == b.coeffs && a.rhs == b.rhs;
  }
};

std::ostream& operator<<(std::ostream& os, const LinIneq& ineq);
std::string to_string(const Rational& q);

struct Polytope {
  std::size_t dim = 0;
  std::vector<LinIneq> ineqs;

  Polytope() = default;
  explicit Polytope(std::size_t n) : dim(n) {}
  Polytope(std::size_t n, std::vector<LinIneq> rows);

  void add(LinIneq ineq);
  std::size_t size() const { return ineqs.size(); }
  bool contains(const RatVec& x) const;
  bool contains(const IntVec& x) const;
  Polytope with(const LinIneq& extra) const;
};

}  // namespace cpsp
