#pragma once

#include "nsub/puiseux.hpp"

#include <vector>

namespace nsub {

/// Double-precision image of a Puiseux polynomial (or of one of its partial
/// derivatives, whose coefficients are formed exactly before conversion).
/// Exponents of derivatives may be negative; evaluation then needs x > 0.
class NumericPoly {
 public:
  struct Term {
    double c;
    double a;
    long a_int;  // valid when integral
    bool integral;
    long b;
  };

  NumericPoly() = default;
  explicit NumericPoly(const PuiseuxPoly& p, long dx = 0, long dy = 0);

  double eval(double x, double y) const;
  /// Coefficients of y^0..y^deg at fixed x.
  std::vector<double> y_coeffs(double x) const;
  long y_degree() const { return ydeg_; }
  const std::vector<Term>& terms() const { return terms_; }

 private:
  std::vector<Term> terms_;
  long ydeg_ = 0;
};

/// x^a for a double exponent, using integer powers when possible.
double pow_x(double x, const NumericPoly::Term& t);

}  // namespace nsub
