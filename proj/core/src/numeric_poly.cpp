#include "nsub/numeric_poly.hpp"

#include <cmath>

namespace nsub {

namespace {

Rational falling(const Rational& a, long k) {
  Rational out(1);
  for (long i = 0; i < k; ++i) out *= (a - i);
  return out;
}

double ipow(double x, long n) {
  if (n < 0) return 1.0 / ipow(x, -n);
  double r = 1.0;
  while (n) {
    if (n & 1) r *= x;
    x *= x;
    n >>= 1;
  }
  return r;
}

}  // namespace

NumericPoly::NumericPoly(const PuiseuxPoly& p, long dx, long dy) {
  for (const auto& [e, c] : p.terms()) {
    if (e.b < dy) continue;
    Rational f = c * falling(e.a, dx) * falling(Rational(e.b), dy);
    if (f == 0) continue;
    Rational a = e.a - dx;
    Term t{to_double(f), to_double(a), 0, is_integer(a), e.b - dy};
    if (t.integral) t.a_int = a.get_num().get_si();
    terms_.push_back(t);
    ydeg_ = std::max(ydeg_, t.b);
  }
}

double pow_x(double x, const NumericPoly::Term& t) { return t.integral ? ipow(x, t.a_int) : std::pow(x, t.a); }

double NumericPoly::eval(double x, double y) const {
  double sum = 0.0, comp = 0.0;
  for (const auto& t : terms_) {
    double term = t.c * pow_x(x, t) * ipow(y, t.b);
    double s = sum + term;
    if (std::fabs(sum) >= std::fabs(term))
      comp += (sum - s) + term;
    else
      comp += (term - s) + sum;
    sum = s;
  }
  return sum + comp;
}

std::vector<double> NumericPoly::y_coeffs(double x) const {
  std::vector<double> out(static_cast<std::size_t>(ydeg_) + 1, 0.0);
  for (const auto& t : terms_) out[static_cast<std::size_t>(t.b)] += t.c * pow_x(x, t);
  return out;
}

}  // namespace nsub
