#include "nsub/upoly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace nsub {

UPoly::UPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { normalize(); }

UPoly UPoly::monomial(const Rational& c, long degree) {
  if (degree < 0) throw std::domain_error("negative degree");
  std::vector<Rational> v(static_cast<std::size_t>(degree) + 1);
  v.back() = c;
  return UPoly(std::move(v));
}

UPoly UPoly::from_roots(const std::vector<Rational>& roots) {
  UPoly out = constant(Rational(1));
  for (const auto& r : roots) out = out * UPoly({-r, Rational(1)});
  return out;
}

void UPoly::normalize() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational UPoly::coeff(long k) const {
  if (k < 0 || k > degree()) return Rational(0);
  return c_[static_cast<std::size_t>(k)];
}

long UPoly::low_degree() const {
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != 0) return static_cast<long>(i);
  return 0;
}

Rational UPoly::eval(const Rational& t) const {
  Rational acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

double UPoly::eval(double t) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + to_double(*it);
  return acc;
}

UPoly UPoly::derivative(long k) const {
  std::vector<Rational> v;
  for (long i = k; i <= degree(); ++i) {
    Rational f(1);
    for (long j = 0; j < k; ++j) f *= (i - j);
    v.push_back(c_[static_cast<std::size_t>(i)] * f);
  }
  return UPoly(std::move(v));
}

UPoly UPoly::monic() const {
  if (is_zero()) return *this;
  Rational l = leading();
  std::vector<Rational> v = c_;
  for (auto& x : v) x /= l;
  return UPoly(std::move(v));
}

UPoly UPoly::primitive() const {
  if (is_zero()) return *this;
  Integer den_lcm(1), num_gcd(0);
  for (const auto& x : c_) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), x.get_den_mpz_t());
  std::vector<Rational> v;
  for (const auto& x : c_) {
    Rational s = x * Rational(den_lcm);
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), s.get_num_mpz_t());
    v.push_back(s);
  }
  if (leading() < 0) num_gcd = -num_gcd;
  for (auto& x : v) x /= Rational(num_gcd);
  return UPoly(std::move(v));
}

UPoly UPoly::scale_arg(const Rational& s) const {
  std::vector<Rational> v = c_;
  Rational f(1);
  for (auto& x : v) {
    x *= f;
    f *= s;
  }
  return UPoly(std::move(v));
}

UPoly operator+(const UPoly& l, const UPoly& r) {
  std::vector<Rational> v(std::max(l.c_.size(), r.c_.size()));
  for (std::size_t i = 0; i < l.c_.size(); ++i) v[i] += l.c_[i];
  for (std::size_t i = 0; i < r.c_.size(); ++i) v[i] += r.c_[i];
  return UPoly(std::move(v));
}

UPoly UPoly::operator-() const {
  std::vector<Rational> v = c_;
  for (auto& x : v) x = -x;
  return UPoly(std::move(v));
}

UPoly operator-(const UPoly& l, const UPoly& r) { return l + (-r); }

UPoly operator*(const UPoly& l, const UPoly& r) {
  if (l.is_zero() || r.is_zero()) return UPoly();
  std::vector<Rational> v(l.c_.size() + r.c_.size() - 1);
  for (std::size_t i = 0; i < l.c_.size(); ++i)
    for (std::size_t j = 0; j < r.c_.size(); ++j) v[i + j] += l.c_[i] * r.c_[j];
  return UPoly(std::move(v));
}

UPoly operator*(const Rational& s, const UPoly& p) {
  std::vector<Rational> v = p.c_;
  for (auto& x : v) x *= s;
  return UPoly(std::move(v));
}

std::string UPoly::to_string(char var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (long k = degree(); k >= 0; --k) {
    const Rational& c = c_[static_cast<std::size_t>(k)];
    if (c == 0) continue;
    Rational mag = nsub::abs(c);
    if (first)
      os << (c < 0 ? "-" : "");
    else
      os << (c < 0 ? " - " : " + ");
    first = false;
    if (k == 0 || mag != 1) os << nsub::to_string(mag) << (k ? "*" : "");
    if (k >= 1) os << var;
    if (k >= 2) os << "^" << k;
  }
  return os.str();
}

std::pair<UPoly, UPoly> divmod(const UPoly& num, const UPoly& den) {
  if (den.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<Rational> r = num.coeffs();
  long dn = den.degree();
  if (num.degree() < dn) return {UPoly(), num};
  std::vector<Rational> q(static_cast<std::size_t>(num.degree() - dn) + 1);
  Rational lead = den.leading();
  for (long k = num.degree() - dn; k >= 0; --k) {
    Rational f = r[static_cast<std::size_t>(k + dn)] / lead;
    q[static_cast<std::size_t>(k)] = f;
    if (f == 0) continue;
    for (long i = 0; i <= dn; ++i) r[static_cast<std::size_t>(k + i)] -= f * den.coeffs()[static_cast<std::size_t>(i)];
  }
  r.resize(static_cast<std::size_t>(dn));
  return {UPoly(std::move(q)), UPoly(std::move(r))};
}

UPoly gcd(const UPoly& a, const UPoly& b) {
  UPoly x = a, y = b;
  while (!y.is_zero()) {
    UPoly r = divmod(x, y).second;
    x = std::move(y);
    y = r.monic();
  }
  return x.monic();
}

}  // namespace nsub
