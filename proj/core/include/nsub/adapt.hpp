#pragma once

#include "nsub/newton.hpp"
#include "nsub/roots.hpp"

#include <compare>
#include <optional>
#include <stdexcept>
#include <vector>

namespace nsub {

/// Decay index (j, p); smaller (-j, p) means faster decay.
struct GrowthIndex {
  Rational j;
  int p = 0;
  bool morse_hyperbolic = false;
  friend bool operator==(const GrowthIndex& l, const GrowthIndex& r) { return l.j == r.j && l.p == r.p; }
};

/// Compares (-j, p) lexicographically; `less` means at least as fast decay and strictly better.
std::strong_ordering lex_compare(const GrowthIndex& g1, const GrowthIndex& g2);

struct Witness {
  std::size_t edge_index = 0;
  CompactEdge edge;
  int x_sign = 1;  // root of S_e(x_sign, y)
  IsolatedRoot root;
  long order = 0;
  Rational d;
};

struct SuperadaptCheck {
  bool superadapted = true;
  std::optional<Witness> witness;
};

/// y -> y + r * (x_sign)^m * x^m.
struct Shear {
  Rational m;
  Rational r;
  int x_sign = 1;
  PuiseuxPoly curve() const;
};

struct AdaptReport {
  PuiseuxPoly result;
  std::vector<Shear> shears_applied;
  bool superadapted = false;
  std::optional<Witness> violating_witness;
};

class AdaptError : public std::runtime_error {
 public:
  AdaptError(const std::string& what, AdaptReport partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const AdaptReport& partial() const { return partial_; }

 private:
  AdaptReport partial_;
};

/// Checks the edges whose relative interior contains the bisectrix touch point
/// for real nonzero roots of S_e(+-1, y) of order >= d. Needs integer x-exponents.
SuperadaptCheck is_superadapted(const PuiseuxPoly& p);

AdaptReport to_superadapted(const PuiseuxPoly& p, int max_iter = 16);

/// Index read off the polygon; throws std::invalid_argument if p is not superadapted.
GrowthIndex growth_index(const PuiseuxPoly& p);
/// Growth index with the hyperbolic Morse multiplicity set to 0.
GrowthIndex oscillatory_index(const PuiseuxPoly& p);

/// No constant or linear terms and a nondegenerate quadratic part.
bool is_morse(const PuiseuxPoly& p);

}  // namespace nsub
