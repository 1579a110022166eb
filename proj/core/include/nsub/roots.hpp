#pragma once

#include "nsub/upoly.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace nsub {

/// A real root isolated in the half-open interval (lo, hi].
struct IsolatedRoot {
  Rational lo;
  Rational hi;
  long multiplicity = 1;
  std::optional<Rational> exact_value;

  /// Midpoint (or the exact value) as a double.
  double approx() const;
  bool is_rational() const { return exact_value.has_value(); }
};

enum class RootDomain { All, Positive };

/// Yun decomposition q = c * prod f_k^k; factors are monic, squarefree and
/// pairwise coprime, listed by increasing exponent.
std::vector<std::pair<UPoly, long>> squarefree_factor(const UPoly& q);

/// Sturm sequence of a polynomial.
std::vector<UPoly> sturm_sequence(const UPoly& f);

/// Number of distinct real roots of a squarefree f in (lo, hi].
long sturm_count(const std::vector<UPoly>& seq, const Rational& lo, const Rational& hi);

/// Power of two strictly exceeding every root modulus.
Rational root_bound(const UPoly& q);

/// Isolating intervals for the distinct real roots (domain Positive: roots > 0),
/// ascending, with exact multiplicities and exact values for rational roots.
std::vector<IsolatedRoot> isolate_real_roots(const UPoly& q, RootDomain domain = RootDomain::All);

/// Narrows r until hi - lo <= width. Rational roots are returned unchanged.
IsolatedRoot refine_root(const IsolatedRoot& r, const UPoly& q, const Rational& width);

}  // namespace nsub
