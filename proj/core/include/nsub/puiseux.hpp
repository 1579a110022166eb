#pragma once

#include "nsub/rational.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace nsub {

/// Exponent pair of a term x^a y^b; a is a nonnegative rational, b a nonnegative integer.
struct Exponent {
  Rational a;
  long b = 0;

  friend bool operator<(const Exponent& l, const Exponent& r) {
    if (l.a != r.a) return l.a < r.a;
    return l.b < r.b;
  }
  friend bool operator==(const Exponent& l, const Exponent& r) { return l.a == r.a && l.b == r.b; }
};

/// Raised when a substitution is not of the form y -> +-y + g(x) with g(0) = 0.
class SubstitutionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Finite sum of terms c x^a y^b with rational a >= 0, integer b >= 0 and
/// rational c != 0. Terms are kept in lexicographic (a, b) order.
///
/// An optional truncation order M records that terms with a + b >= M were
/// discarded somewhere upstream; every operation propagates the order and
/// drops stored terms that fall beyond it.
class PuiseuxPoly {
 public:
  using TermMap = std::map<Exponent, Rational>;

  PuiseuxPoly() = default;

  static PuiseuxPoly constant(const Rational& c);
  static PuiseuxPoly monomial(const Rational& c, const Rational& a, long b);
  static PuiseuxPoly x_power(const Rational& a) { return monomial(Rational(1), a, 0); }
  static PuiseuxPoly var_x() { return monomial(Rational(1), Rational(1), 0); }
  static PuiseuxPoly var_y() { return monomial(Rational(1), Rational(0), 1); }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Smallest N with N*a integral for every stored x-exponent.
  long ramification() const;
  const std::optional<Rational>& truncation_order() const { return truncation_; }

  /// Returns a copy with truncation order min(current, order) applied.
  PuiseuxPoly truncated(const Rational& order) const;
  PuiseuxPoly without_truncation() const;

  bool is_x_only() const;
  bool has_integer_x_exponents() const { return ramification() == 1; }
  long y_degree() const;
  Rational coefficient(const Rational& a, long b) const;
  /// Smallest x-exponent among the stored terms (the polynomial must be nonzero).
  Rational min_x_exponent() const;

  void add_term(const Rational& c, const Rational& a, long b);

  PuiseuxPoly operator-() const;
  PuiseuxPoly& operator+=(const PuiseuxPoly& o);
  PuiseuxPoly& operator-=(const PuiseuxPoly& o);
  PuiseuxPoly& operator*=(const Rational& c);

  friend PuiseuxPoly operator+(PuiseuxPoly l, const PuiseuxPoly& r) { return l += r; }
  friend PuiseuxPoly operator-(PuiseuxPoly l, const PuiseuxPoly& r) { return l -= r; }
  friend PuiseuxPoly operator*(const PuiseuxPoly& l, const PuiseuxPoly& r);
  friend PuiseuxPoly operator*(PuiseuxPoly l, const Rational& c) { return l *= c; }
  friend PuiseuxPoly operator*(const Rational& c, PuiseuxPoly r) { return r *= c; }

  /// Equality of term sets and truncation orders.
  friend bool operator==(const PuiseuxPoly& l, const PuiseuxPoly& r) {
    return l.terms_ == r.terms_ && l.truncation_ == r.truncation_;
  }

  /// Human readable form, e.g. "x^2*y - 2*x^(1/2)"; parseable by parse_expression.
  std::string to_string() const;

 private:
  void enforce_truncation();

  TermMap terms_;
  std::optional<Rational> truncation_;
};

PuiseuxPoly poly_add(const PuiseuxPoly& p, const PuiseuxPoly& q);
PuiseuxPoly poly_mul(const PuiseuxPoly& p, const PuiseuxPoly& q);
PuiseuxPoly poly_pow(const PuiseuxPoly& p, long n);

/// k-th partial derivative in y.
PuiseuxPoly deriv_y(const PuiseuxPoly& p, long k);
/// k-th partial derivative in x (exponents may become negative only if a < k;
/// such terms are required to vanish, i.e. a must be a nonnegative integer < k).
PuiseuxPoly deriv_x(const PuiseuxPoly& p, long k);

/// p(x, sign_y*y + g(x)). g must be a nonzero-free curve: y-free with all
/// x-exponents > 0, otherwise SubstitutionError("not a curve substitution").
PuiseuxPoly subst_shear(const PuiseuxPoly& p, int sign_y, const PuiseuxPoly& g);

/// p(x, y + g(x)) with no restriction on the exponents of g (g may have a
/// constant term). Used for evaluating at curves y = t(x).
PuiseuxPoly subst_y(const PuiseuxPoly& p, const PuiseuxPoly& g);

/// p(x, x^m y): (a, b) -> (a + m b, b).
PuiseuxPoly subst_scale(const PuiseuxPoly& p, const Rational& m);

/// p / x^alpha. Throws std::domain_error when some term has x-exponent < alpha.
PuiseuxPoly divide_out_x(const PuiseuxPoly& p, const Rational& alpha);

/// The frame function (x, y) -> p(X, Y) with (X, Y) = (sx x, sy y), or
/// (sx y, sy x) when swap is set. Reflection in x and swaps require integer
/// x-exponents (std::domain_error otherwise).
PuiseuxPoly reflect_axes(const PuiseuxPoly& p, int sx, int sy, bool swap = false);

/// Floating evaluation with compensated summation in canonical term order.
/// x < 0 is rejected when the ramification exceeds 1.
double eval_real(const PuiseuxPoly& p, double x, double y);

}  // namespace nsub

namespace nsub {

/// p(x, g(x)) for a y-free g; terms with x-exponent >= cap are dropped (and the
/// result is marked truncated at cap) when a cap is given.
PuiseuxPoly subst_curve(const PuiseuxPoly& p, const PuiseuxPoly& g, const std::optional<Rational>& cap = std::nullopt);

/// Drops terms with |coefficient| < threshold; returns the sum of the dropped magnitudes.
Rational snap_small(PuiseuxPoly& p, const Rational& threshold);

/// Rounds every coefficient to a multiple of 2^-bits (zeros are dropped).
PuiseuxPoly round_coefficients(const PuiseuxPoly& p, unsigned bits);

}  // namespace nsub
