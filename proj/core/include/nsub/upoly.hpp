#pragma once

#include "nsub/rational.hpp"

#include <string>
#include <vector>

namespace nsub {

/// Dense univariate polynomial with rational coefficients, lowest degree first.
/// The zero polynomial has no coefficients; otherwise the leading one is nonzero.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<Rational> coeffs);
  static UPoly constant(const Rational& c) { return UPoly({c}); }
  static UPoly monomial(const Rational& c, long degree);
  /// Product of (y - r) factors.
  static UPoly from_roots(const std::vector<Rational>& roots);

  const std::vector<Rational>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }
  Rational coeff(long k) const;
  /// Smallest k with a nonzero coefficient (0 for the zero polynomial).
  long low_degree() const;

  Rational eval(const Rational& t) const;
  double eval(double t) const;
  int sign_at(const Rational& t) const { return sign(eval(t)); }

  UPoly derivative(long k = 1) const;
  UPoly monic() const;
  /// Scaled to integer coefficients with content 1 and positive leading coefficient.
  UPoly primitive() const;
  /// q(s*t) for a rational s.
  UPoly scale_arg(const Rational& s) const;

  friend UPoly operator+(const UPoly& l, const UPoly& r);
  friend UPoly operator-(const UPoly& l, const UPoly& r);
  friend UPoly operator*(const UPoly& l, const UPoly& r);
  friend UPoly operator*(const Rational& s, const UPoly& p);
  UPoly operator-() const;
  friend bool operator==(const UPoly& l, const UPoly& r) { return l.c_ == r.c_; }

  std::string to_string(char var = 'y') const;

 private:
  void normalize();
  std::vector<Rational> c_;
};

/// Euclidean division: returns {quotient, remainder}. Throws std::domain_error on a zero divisor.
std::pair<UPoly, UPoly> divmod(const UPoly& num, const UPoly& den);
/// Monic gcd (zero only when both inputs are zero).
UPoly gcd(const UPoly& a, const UPoly& b);

}  // namespace nsub
