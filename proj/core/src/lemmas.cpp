#include "nsub/lemmas.hpp"

#include "nsub/roots.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsub {

const char* to_string(MonomialRegime r) {
  switch (r) {
    case MonomialRegime::YDominant: return "y-dominant";
    case MonomialRegime::Balanced: return "balanced";
    case MonomialRegime::XDominant: return "x-dominant";
    case MonomialRegime::Degenerate: return "degenerate";
  }
  return "?";
}

MonomialMeasure monomial_measure_exact(double a, const Rational& alpha, const Rational& beta, const Rational& m,
                                       double N, double x0, double eps) {
  if (!(a > 0) || !(N > 0) || !(x0 > 0) || !(eps > 0)) throw std::invalid_argument("a, N, x0, eps must be positive");
  if (sign(alpha) < 0 || sign(beta) < 0 || sign(m) < 0) throw std::invalid_argument("alpha, beta, m must be >= 0");
  MonomialMeasure out;
  const double al = to_double(alpha), be = to_double(beta), md = to_double(m);
  auto under_roof = [&](double X) { return N * std::pow(X, md + 1.0) / (md + 1.0); };

  if (sign(alpha) == 0 && sign(beta) == 0) {
    out.regime = MonomialRegime::Degenerate;
    out.full_region = a < eps;
    out.value = out.full_region ? under_roof(x0) : 0.0;
    return out;
  }
  if (beta > alpha) {
    out.regime = MonomialRegime::YDominant;
    out.leading_exponent = 1 / beta;
  } else if (beta == alpha) {
    out.regime = MonomialRegime::Balanced;
    out.leading_exponent = 1 / beta;
    out.log_factor = true;
  } else {
    out.regime = MonomialRegime::XDominant;
    out.leading_exponent = (m + 1) / (alpha + m * beta);
  }

  if (sign(beta) == 0) {
    double x1 = std::pow(eps / a, 1.0 / al);
    out.value = under_roof(std::min(x1, x0));
    return out;
  }
  const double level = std::pow(eps / a, 1.0 / be);  // y < level * x^(-alpha/beta)
  const double denom = al + md * be;
  if (denom == 0.0) {  // alpha = 0 and m = 0: constant slices
    out.value = x0 * std::min(N, level);
    return out;
  }
  const double xstar = std::pow(eps / (a * std::pow(N, be)), 1.0 / denom);
  if (xstar >= x0) {
    out.value = under_roof(x0);
    return out;
  }
  double v = under_roof(xstar);
  const double gamma = 1.0 - al / be;
  if (beta == alpha) {
    v += level * std::log(x0 / xstar);
  } else {
    v += level * (std::pow(x0, gamma) - std::pow(xstar, gamma)) / gamma;
  }
  out.value = v;
  return out;
}

double vdc_sublevel_bound(int k, double c, double eps, double interval_length) {
  if (k <= 0 || !(c > 0) || !(eps > 0) || !(interval_length > 0))
    throw std::invalid_argument("vdc bound arguments must be positive");
  return std::min(interval_length, 4.0 * std::pow(c, -1.0 / k) * std::pow(eps, 1.0 / k));
}

long count_roots_closed(const UPoly& q, const Rational& lo, const Rational& hi) {
  if (q.is_zero()) throw std::invalid_argument("zero polynomial has infinitely many roots");
  if (q.degree() == 0) return 0;
  UPoly sf = divmod(q, gcd(q, q.derivative())).first;
  auto seq = sturm_sequence(sf);
  long n = sturm_count(seq, lo, hi);
  if (sf.eval(lo) == 0) ++n;
  return n;
}

double sublevel_length_exact(const UPoly& f, const Rational& lo, const Rational& hi, const Rational& eps) {
  if (!(hi > lo)) return 0.0;
  std::vector<Rational> pts{lo, hi};
  Rational width = (hi - lo) / Rational(Integer(1) << 64);
  for (int s : {-1, 1}) {
    UPoly g = f - UPoly::constant(Rational(s) * eps);
    if (g.is_zero()) return 0.0;
    for (const auto& r : isolate_real_roots(g)) {
      IsolatedRoot t = refine_root(r, g, width);
      Rational v = t.exact_value ? *t.exact_value : Rational((t.lo + t.hi) / 2);
      if (v > lo && v < hi) pts.push_back(v);
    }
  }
  std::sort(pts.begin(), pts.end());
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (!(pts[i + 1] > pts[i])) continue;
    Rational mid = (pts[i] + pts[i + 1]) / 2;
    if (abs(f.eval(mid)) < eps) len += to_double(Rational(pts[i + 1] - pts[i]));
  }
  return len;
}

bool bounded_below(const UPoly& g, const Rational& T, const Rational& lo, const Rational& hi) {
  // |g| >= T on [lo, hi] iff h = g^2 - T^2 keeps a nonnegative sign there.
  UPoly h = g * g - UPoly::constant(T * T);
  if (h.is_zero()) return true;
  if (h.degree() == 0) return sign(h.leading()) > 0;
  UPoly odd = UPoly::constant(Rational(1));
  for (const auto& [fac, e] : squarefree_factor(h))
    if (e % 2 == 1) odd = odd * fac;
  if (odd.degree() > 0) {
    long inside = sturm_count(sturm_sequence(odd), lo, hi) - (odd.eval(hi) == 0 ? 1 : 0);
    if (inside > 0) return false;
  }
  for (long k = 0; k <= h.degree() + 1; ++k) {
    Rational t = lo + (hi - lo) * Rational(k, h.degree() + 1);
    int s = sign(h.eval(t));
    if (s != 0) return s > 0;
  }
  return false;
}

VdcResult vdc_check(const UPoly& f, const Rational& lo, const Rational& hi, int k, const Rational& c,
                    const Rational& eps) {
  if (k <= 0 || sign(c) <= 0 || sign(eps) <= 0 || !(hi > lo)) throw std::invalid_argument("vdc_check: bad arguments");
  UPoly g = f.derivative(k);
  Rational fact(1);
  for (int i = 2; i <= k; ++i) fact *= i;
  Rational T = c * fact;
  if (!bounded_below(g, T, lo, hi)) {
    throw std::domain_error("hypothesis violated");
  }
  VdcResult out;
  out.measured = sublevel_length_exact(f, lo, hi, eps);
  out.bound = vdc_sublevel_bound(k, to_double(c), to_double(eps), to_double(Rational(hi - lo)));
  out.ok = out.measured <= out.bound;
  return out;
}

}  // namespace nsub

#include "nsub/parallel.hpp"

namespace nsub {

namespace {

Rational draw_rational(std::uint64_t seed, std::uint64_t stream, std::uint64_t idx, long lo, long hi, long den) {
  double u = hashed_uniform(seed, stream, idx);
  long span = (hi - lo) * den;
  long k = static_cast<long>(u * static_cast<double>(span + 1));
  return Rational(lo * den + std::min(k, span), den);
}

// Lower bound for |g| on [lo, hi] when g has no root there: min over the ends and critical points.
std::optional<Rational> min_abs(const UPoly& g, const Rational& lo, const Rational& hi) {
  if (count_roots_closed(g, lo, hi) > 0) return std::nullopt;
  Rational best = std::min(Rational(abs(g.eval(lo))), Rational(abs(g.eval(hi))));
  UPoly dg = g.derivative();
  if (!dg.is_zero() && dg.degree() > 0) {
    Rational w = (hi - lo) / Rational(1 << 20);
    for (const auto& r : isolate_real_roots(dg)) {
      IsolatedRoot t = refine_root(r, dg, w);
      for (const Rational& v : {t.lo, t.hi}) {
        if (v < lo || v > hi) continue;
        best = std::min(best, Rational(abs(g.eval(v))));
      }
    }
  }
  return best;
}

}  // namespace

VdcEnsemble vdc_ensemble(int k, int count, std::uint64_t seed, bool keep_cases) {
  if (k <= 0 || count <= 0) throw std::invalid_argument("vdc_ensemble: k and count must be positive");
  VdcEnsemble out;
  out.k = k;
  std::vector<std::optional<VdcInstance>> found(static_cast<std::size_t>(count));
  std::vector<int> rejected(static_cast<std::size_t>(count), 0);
  const std::uint64_t base = seed * 1000003ULL + static_cast<std::uint64_t>(k);
  parallel_for(static_cast<std::size_t>(count), [&](std::size_t i) {
    for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
      std::uint64_t idx = i * 64 + attempt;
      int degree = k + static_cast<int>(hashed_uniform(base, 1, idx) * 3.0);
      std::vector<Rational> coeffs;
      for (int d = 0; d <= degree; ++d) coeffs.push_back(draw_rational(base, 10 + d, idx, -4, 4, 16));
      if (coeffs.back() == 0) coeffs.back() = 1;
      UPoly f(coeffs);
      Rational lo = draw_rational(base, 2, idx, -2, 1, 8);
      Rational hi = lo + draw_rational(base, 3, idx, 0, 2, 8) + Rational(1, 8);
      Rational fact(1);
      for (int j = 2; j <= k; ++j) fact *= j;
      auto m = min_abs(f.derivative(k), lo, hi);
      if (!m || sign(*m) == 0) {
        ++rejected[i];
        continue;
      }
      Rational c = *m / (2 * fact);
      Rational eps = from_double(std::pow(10.0, -1.0 - 7.0 * hashed_uniform(base, 4, idx)));
      try {
        VdcResult r = vdc_check(f, lo, hi, k, c, eps);
        found[i] = VdcInstance{f, lo, hi, c, eps, r};
        return;
      } catch (const std::domain_error&) {
        ++rejected[i];
      }
    }
  });
  for (std::size_t i = 0; i < found.size(); ++i) {
    out.rejected += rejected[i];
    if (!found[i]) continue;
    ++out.instances;
    const VdcResult& r = found[i]->result;
    if (!r.ok) ++out.violations;
    out.max_ratio = std::max(out.max_ratio, r.measured / r.bound);
    if (keep_cases) out.cases.push_back(*found[i]);
  }
  return out;
}

}  // namespace nsub
