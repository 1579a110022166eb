#include "nsub/puiseux.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace nsub {

namespace {

Rational falling(const Rational& a, long k) {
  Rational out(1);
  for (long i = 0; i < k; ++i) out *= (a - i);
  return out;
}

Rational binomial(long n, long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(r);
}

std::optional<Rational> min_order(const std::optional<Rational>& l, const std::optional<Rational>& r) {
  if (!l) return r;
  if (!r) return l;
  return std::min(*l, *r);
}

}  // namespace

PuiseuxPoly PuiseuxPoly::constant(const Rational& c) {
  PuiseuxPoly p;
  p.add_term(c, Rational(0), 0);
  return p;
}

PuiseuxPoly PuiseuxPoly::monomial(const Rational& c, const Rational& a, long b) {
  PuiseuxPoly p;
  p.add_term(c, a, b);
  return p;
}

long PuiseuxPoly::ramification() const {
  long n = 1;
  for (const auto& [e, c] : terms_) n = lcm_denominator(n, e.a);
  return n;
}

PuiseuxPoly PuiseuxPoly::truncated(const Rational& order) const {
  PuiseuxPoly out = *this;
  out.truncation_ = min_order(truncation_, order);
  out.enforce_truncation();
  return out;
}

PuiseuxPoly PuiseuxPoly::without_truncation() const {
  PuiseuxPoly out = *this;
  out.truncation_.reset();
  return out;
}

bool PuiseuxPoly::is_x_only() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.b == 0; });
}

long PuiseuxPoly::y_degree() const {
  long d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.b);
  return d;
}

Rational PuiseuxPoly::coefficient(const Rational& a, long b) const {
  auto it = terms_.find(Exponent{a, b});
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational PuiseuxPoly::min_x_exponent() const {
  if (terms_.empty()) throw std::domain_error("min_x_exponent of the zero polynomial");
  Rational m = terms_.begin()->first.a;
  for (const auto& [e, c] : terms_) m = std::min(m, e.a);
  return m;
}

void PuiseuxPoly::add_term(const Rational& c, const Rational& a, long b) {
  if (a < 0 || b < 0) throw std::domain_error("negative exponent in Puiseux polynomial");
  if (c == 0) return;
  if (truncation_ && a + b >= *truncation_) return;
  Exponent e{a, b};
  e.a.canonicalize();
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void PuiseuxPoly::enforce_truncation() {
  if (!truncation_) return;
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->first.a + it->first.b >= *truncation_)
      it = terms_.erase(it);
    else
      ++it;
  }
}

PuiseuxPoly PuiseuxPoly::operator-() const {
  PuiseuxPoly out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

PuiseuxPoly& PuiseuxPoly::operator+=(const PuiseuxPoly& o) {
  truncation_ = min_order(truncation_, o.truncation_);
  enforce_truncation();
  for (const auto& [e, c] : o.terms_) add_term(c, e.a, e.b);
  return *this;
}

PuiseuxPoly& PuiseuxPoly::operator-=(const PuiseuxPoly& o) {
  truncation_ = min_order(truncation_, o.truncation_);
  enforce_truncation();
  for (const auto& [e, c] : o.terms_) add_term(-c, e.a, e.b);
  return *this;
}

PuiseuxPoly& PuiseuxPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

PuiseuxPoly operator*(const PuiseuxPoly& l, const PuiseuxPoly& r) {
  PuiseuxPoly out;
  out.truncation_ = min_order(l.truncation_, r.truncation_);
  for (const auto& [el, cl] : l.terms_)
    for (const auto& [er, cr] : r.terms_) out.add_term(cl * cr, el.a + er.a, el.b + er.b);
  return out;
}

std::string PuiseuxPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    Rational mag = abs(c);
    bool neg = c < 0;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    bool has_var = e.a != 0 || e.b != 0;
    bool wrote = false;
    if (mag != 1 || !has_var) {
      os << nsub::to_string(mag);
      wrote = true;
    }
    if (e.a != 0) {
      if (wrote) os << "*";
      os << "x";
      if (e.a != 1) {
        if (is_integer(e.a))
          os << "^" << nsub::to_string(e.a);
        else
          os << "^(" << nsub::to_string(e.a) << ")";
      }
      wrote = true;
    }
    if (e.b != 0) {
      if (wrote) os << "*";
      os << "y";
      if (e.b != 1) os << "^" << e.b;
    }
  }
  return os.str();
}

PuiseuxPoly poly_add(const PuiseuxPoly& p, const PuiseuxPoly& q) { return p + q; }

PuiseuxPoly poly_mul(const PuiseuxPoly& p, const PuiseuxPoly& q) { return p * q; }

PuiseuxPoly poly_pow(const PuiseuxPoly& p, long n) {
  if (n < 0) throw std::domain_error("negative power of a polynomial");
  PuiseuxPoly out = PuiseuxPoly::constant(Rational(1));
  if (p.truncation_order()) out = out.truncated(*p.truncation_order());
  PuiseuxPoly base = p;
  while (n > 0) {
    if (n & 1) out = out * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return out;
}

PuiseuxPoly deriv_y(const PuiseuxPoly& p, long k) {
  if (k < 0) throw std::domain_error("negative derivative order");
  PuiseuxPoly out;
  if (p.truncation_order()) out = out.truncated(*p.truncation_order() - k);
  for (const auto& [e, c] : p.terms()) {
    if (e.b < k) continue;
    out.add_term(c * falling(Rational(e.b), k), e.a, e.b - k);
  }
  return out;
}

PuiseuxPoly deriv_x(const PuiseuxPoly& p, long k) {
  if (k < 0) throw std::domain_error("negative derivative order");
  PuiseuxPoly out;
  if (p.truncation_order()) out = out.truncated(*p.truncation_order() - k);
  for (const auto& [e, c] : p.terms()) {
    Rational f = falling(e.a, k);
    if (f == 0) continue;
    if (e.a < k) throw std::domain_error("x-derivative leaves a negative exponent");
    out.add_term(c * f, e.a - k, e.b);
  }
  return out;
}

namespace {

// p(x, sign*y + g(x)), dropping intermediate terms beyond `cap` in total degree.
PuiseuxPoly compose_y(const PuiseuxPoly& p, int sign, const PuiseuxPoly& g,
                      const std::optional<Rational>& cap) {
  long maxb = p.y_degree();
  std::vector<PuiseuxPoly> gpow(static_cast<std::size_t>(maxb) + 1);
  PuiseuxPoly g_capped = g.without_truncation();
  gpow[0] = PuiseuxPoly::constant(Rational(1));
  if (cap) {
    gpow[0] = gpow[0].truncated(*cap);
    g_capped = g_capped.truncated(*cap);
  }
  for (long j = 1; j <= maxb; ++j) gpow[j] = gpow[j - 1] * g_capped;

  PuiseuxPoly out;
  if (cap) out = out.truncated(*cap);
  for (const auto& [e, c] : p.terms()) {
    for (long k = 0; k <= e.b; ++k) {
      Rational coef = c * binomial(e.b, k);
      if (sign < 0 && (k % 2 == 1)) coef = -coef;
      for (const auto& [ge, gc] : gpow[e.b - k].terms()) out.add_term(coef * gc, e.a + ge.a, k);
    }
  }
  return out;
}

std::optional<Rational> shear_truncation(const PuiseuxPoly& p, const PuiseuxPoly& g) {
  std::optional<Rational> order;
  if (p.truncation_order()) {
    Rational factor(1);
    if (!g.is_zero()) factor = std::min(Rational(1), g.min_x_exponent());
    order = *p.truncation_order() * factor;
  }
  return min_order(order, g.truncation_order());
}

}  // namespace

PuiseuxPoly subst_shear(const PuiseuxPoly& p, int sign_y, const PuiseuxPoly& g) {
  if (sign_y != 1 && sign_y != -1) throw std::invalid_argument("sign_y must be +1 or -1");
  if (!g.is_x_only()) throw SubstitutionError("not a curve substitution");
  for (const auto& [e, c] : g.terms())
    if (e.a <= 0) throw SubstitutionError("not a curve substitution (g(0) must vanish)");
  return compose_y(p, sign_y, g, shear_truncation(p, g));
}

PuiseuxPoly subst_y(const PuiseuxPoly& p, const PuiseuxPoly& g) {
  if (!g.is_x_only()) throw SubstitutionError("not a curve substitution");
  return compose_y(p, 1, g, shear_truncation(p, g));
}

PuiseuxPoly subst_scale(const PuiseuxPoly& p, const Rational& m) {
  if (m <= 0) throw std::domain_error("scale exponent must be positive");
  PuiseuxPoly out;
  if (p.truncation_order()) out = out.truncated(*p.truncation_order());
  for (const auto& [e, c] : p.terms()) out.add_term(c, e.a + m * e.b, e.b);
  return out;
}

PuiseuxPoly divide_out_x(const PuiseuxPoly& p, const Rational& alpha) {
  PuiseuxPoly out;
  if (p.truncation_order()) out = out.truncated(*p.truncation_order() - alpha);
  for (const auto& [e, c] : p.terms()) {
    if (e.a < alpha)
      throw std::domain_error("divide_out_x: term x^" + to_string(e.a) + " y^" + std::to_string(e.b) +
                              " has x-exponent below " + to_string(alpha));
    out.add_term(c, e.a - alpha, e.b);
  }
  return out;
}

PuiseuxPoly reflect_axes(const PuiseuxPoly& p, int sx, int sy, bool swap) {
  if ((sx != 1 && sx != -1) || (sy != 1 && sy != -1))
    throw std::invalid_argument("reflection signs must be +1 or -1");
  if ((sx == -1 || swap) && !p.has_integer_x_exponents())
    throw std::domain_error("reflection or swap of a polynomial with fractional x-exponents");
  PuiseuxPoly out;
  if (p.truncation_order()) out = out.truncated(*p.truncation_order());
  for (const auto& [e, c] : p.terms()) {
    Rational coef = c;
    long a_int = is_integer(e.a) ? e.a.get_num().get_si() : 0;
    if (sx == -1 && (a_int % 2 != 0)) coef = -coef;
    if (sy == -1 && (e.b % 2 != 0)) coef = -coef;
    if (swap)
      out.add_term(coef, Rational(e.b), a_int);
    else
      out.add_term(coef, e.a, e.b);
  }
  return out;
}

double eval_real(const PuiseuxPoly& p, double x, double y) {
  if (x < 0 && p.ramification() > 1)
    throw std::domain_error("eval_real: x < 0 with fractional x-exponents");
  double sum = 0.0, comp = 0.0;
  for (const auto& [e, c] : p.terms()) {
    double xa;
    if (is_integer(e.a))
      xa = std::pow(x, static_cast<double>(e.a.get_num().get_si()));
    else
      xa = std::pow(x, to_double(e.a));
    double term = to_double(c) * xa * std::pow(y, static_cast<double>(e.b));
    double t = sum + term;
    if (std::fabs(sum) >= std::fabs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace nsub

namespace nsub {

PuiseuxPoly subst_curve(const PuiseuxPoly& p, const PuiseuxPoly& g, const std::optional<Rational>& cap) {
  if (!g.is_x_only()) throw SubstitutionError("not a curve substitution");
  long maxb = p.y_degree();
  PuiseuxPoly base = g.without_truncation();
  PuiseuxPoly one = PuiseuxPoly::constant(Rational(1));
  if (cap) {
    base = base.truncated(*cap);
    one = one.truncated(*cap);
  }
  std::vector<PuiseuxPoly> gpow{one};
  for (long j = 1; j <= maxb; ++j) gpow.push_back(gpow.back() * base);
  PuiseuxPoly out;
  if (cap) out = out.truncated(*cap);
  for (const auto& [e, c] : p.terms())
    for (const auto& [ge, gc] : gpow[static_cast<std::size_t>(e.b)].terms()) out.add_term(c * gc, e.a + ge.a, 0);
  return out;
}

Rational snap_small(PuiseuxPoly& p, const Rational& threshold) {
  Rational dropped(0);
  PuiseuxPoly kept;
  if (p.truncation_order()) kept = kept.truncated(*p.truncation_order());
  for (const auto& [e, c] : p.terms()) {
    if (abs(c) < threshold)
      dropped += abs(c);
    else
      kept.add_term(c, e.a, e.b);
  }
  p = kept;
  return dropped;
}

PuiseuxPoly round_coefficients(const PuiseuxPoly& p, unsigned bits) {
  PuiseuxPoly out;
  if (p.truncation_order()) out = out.truncated(*p.truncation_order());
  for (const auto& [e, c] : p.terms()) out.add_term(round_dyadic(c, bits), e.a, e.b);
  return out;
}

}  // namespace nsub
