#pragma once

#include "nsub/upoly.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nsub {

/// Which side of the corner x* dominates the monomial sublevel set on
/// A_{m,N} = {0 < x < x0, 0 < y < N x^m}: y-dominant (beta > alpha, order eps^(1/beta)),
/// balanced (beta = alpha, order eps^(1/beta) |ln eps|) or x-dominant
/// (beta < alpha, order eps^((m+1)/(alpha+m*beta))).
enum class MonomialRegime { YDominant, Balanced, XDominant, Degenerate };

const char* to_string(MonomialRegime r);

struct MonomialMeasure {
  double value = 0.0;
  MonomialRegime regime = MonomialRegime::Degenerate;
  Rational leading_exponent;  // power of eps in the leading term (0 when degenerate)
  bool log_factor = false;
  bool full_region = false;   // alpha = beta = 0 and a < eps
};

/// Exact |{(x, y) in A_{m,N}: a x^alpha y^beta < eps}| by piecewise integration
/// around the corner x* where N x^m meets the level curve.
MonomialMeasure monomial_measure_exact(double a, const Rational& alpha, const Rational& beta, const Rational& m,
                                       double N, double x0, double eps);

/// min(|I|, 4 c^(-1/k) eps^(1/k)).
double vdc_sublevel_bound(int k, double c, double eps, double interval_length);

struct VdcResult {
  double measured = 0.0;
  double bound = 0.0;
  bool ok = false;
};

/// Exact test of |g| >= T on [lo, hi].
bool bounded_below(const UPoly& g, const Rational& T, const Rational& lo, const Rational& hi);

/// Certifies |f^(k)| >= c k! on [lo, hi] (std::domain_error "hypothesis violated"
/// otherwise), then measures {t in [lo, hi]: |f(t)| < eps} from the real roots
/// of f -+ eps and compares with the bound.
VdcResult vdc_check(const UPoly& f, const Rational& lo, const Rational& hi, int k, const Rational& c,
                    const Rational& eps);

/// Exact length of {t in [lo, hi]: |f(t)| < eps} (endpoints refined to ~1e-18 relative).
double sublevel_length_exact(const UPoly& f, const Rational& lo, const Rational& hi, const Rational& eps);

/// Number of distinct roots of q in the closed interval [lo, hi]; q must be nonzero.
long count_roots_closed(const UPoly& q, const Rational& lo, const Rational& hi);

}  // namespace nsub

namespace nsub {

struct VdcInstance {
  UPoly f;
  Rational lo, hi, c, eps;
  VdcResult result;
};

struct VdcEnsemble {
  int k = 1;
  int instances = 0;
  int violations = 0;
  int rejected = 0;        // draws whose derivative bound could not be certified
  double max_ratio = 0.0;  // worst measured / bound
  std::vector<VdcInstance> cases;
};

/// Random polynomials of degree k..k+2 on random intervals with a certified
/// c = (1/2) min|f^(k)| / k!, checked at log-uniform eps in [1e-8, 1e-1].
VdcEnsemble vdc_ensemble(int k, int count, std::uint64_t seed, bool keep_cases = false);

}  // namespace nsub
