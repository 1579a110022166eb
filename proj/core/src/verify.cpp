#include "nsub/parallel.hpp"
#include "nsub/resolve.hpp"

#include <cmath>

namespace nsub {

namespace {

double frac(double v) { return v - std::floor(v); }

Rational falling(const Rational& a, long k) {
  Rational out(1);
  for (long i = 0; i < k; ++i) out *= (a - i);
  return out;
}

}  // namespace

VerifyReport verify_chart(const PuiseuxPoly& p, const Chart& c, int samples, std::uint64_t seed) {
  PuiseuxPoly R = chart_phase(p, c);
  const double xmax = to_double(c.x_max);
  const double b = to_double(c.monomial.coeff);
  const double alpha = to_double(c.monomial.alpha);
  const long beta = c.monomial.beta;
  const double delta = to_double(c.delta);
  NumericPoly lower(c.lower), upper(c.upper), R0(R);

  struct Deriv {
    NumericPoly poly;
    double mono_coeff;
    long k, l;
  };
  std::vector<Deriv> derivs;
  if (c.mode == ChartMode::C) {
    long kmax = ceil(c.monomial.alpha).get_si();
    for (long k = 0; k <= kmax; ++k)
      for (long l = 0; l <= beta; ++l) {
        if (k == 0 && l == 0) continue;
        Rational mc = c.monomial.coeff * falling(c.monomial.alpha, k) * falling(Rational(beta), l);
        derivs.push_back({NumericPoly(R, k, l), to_double(mc), k, l});
      }
  }

  // Rotated R2 Kronecker sequence.
  const double g = 1.32471795724474602596;
  const double a1 = 1.0 / g, a2 = 1.0 / (g * g);
  const double s1 = hashed_uniform(seed, 11, 0), s2 = hashed_uniform(seed, 12, 0);

  VerifyReport rep;
  for (int i = 0; i < samples; ++i) {
    double v1 = frac(s1 + a1 * (i + 1)), v2 = frac(s2 + a2 * (i + 1));
    int cat = i % 6;
    double x = cat < 3 ? xmax * v1 : xmax * std::exp2(-20.0 * v1);
    if (!(x > 0) || x >= xmax) continue;
    double lo = lower.eval(x, 0.0), hi = upper.eval(x, 0.0);
    if (!(hi > lo)) throw std::domain_error("chart domain empty at x_max: shrink x_max");
    double w = hi - lo;
    double y;
    switch (cat % 3) {
      case 0: y = lo + w * v2; break;
      case 1: y = lo + w * std::exp2(-20.0 * v2); break;
      default: y = hi - w * std::exp2(-20.0 * v2); break;
    }
    if (!(y > lo) || !(y < hi)) continue;
    double F = R0.eval(x, y);
    if (c.mode == ChartMode::C) {
      double mono = b * std::pow(x, alpha) * std::pow(y, static_cast<double>(beta));
      if (mono == 0.0 || !std::isfinite(mono) || !std::isfinite(F)) continue;
      ++rep.samples;
      double ratio = F / mono;
      if (!(ratio > 0)) rep.sign_constant = false;
      rep.max_ratio_violation = std::max(rep.max_ratio_violation, std::fabs(ratio - 1.0));
      for (const auto& d : derivs) {
        double scale = std::fabs(b) * std::pow(x, alpha - d.k) * std::pow(y, static_cast<double>(beta - d.l));
        if (scale == 0.0 || !std::isfinite(scale)) continue;
        double lhs = d.poly.eval(x, y) - d.mono_coeff * std::pow(x, alpha - d.k) * std::pow(y, static_cast<double>(beta - d.l));
        rep.max_derivative_violation = std::max(rep.max_derivative_violation, std::fabs(lhs) / scale);
      }
    } else {
      double scale = std::fabs(b) * std::pow(x, alpha);
      if (scale == 0.0 || !std::isfinite(scale) || !std::isfinite(F)) continue;
      ++rep.samples;
      if ((F > 0) != (b > 0) || F == 0.0) rep.sign_constant = false;
      double val = std::fabs(F) / scale;
      double excess = std::max({0.0, c.band_lo / val - 1.0, val / c.band_hi - 1.0});
      rep.max_ratio_violation = std::max(rep.max_ratio_violation, excess);
    }
  }
  if (c.mode == ChartMode::C) {
    rep.ratio_ok = rep.max_ratio_violation <= delta;
    rep.derivative_ok = rep.max_derivative_violation <= delta;
  } else {
    rep.ratio_ok = rep.max_ratio_violation == 0.0;
  }
  return rep;
}

}  // namespace nsub
