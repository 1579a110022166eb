#pragma once

#include "nsub/expr.hpp"
#include "nsub/puiseux.hpp"
#include "nsub/upoly.hpp"

#include <random>
#include <string>

namespace nsub::test {

inline PuiseuxPoly P(const std::string& s) { return parse_expression(s).poly; }

inline Rational Q(long n, long d = 1) { return make_rational(n, d); }

/// Small random polynomial: up to `terms` terms, x-exponents in multiples of 1/ram.
inline PuiseuxPoly random_poly(std::mt19937_64& rng, int terms, int max_a, int max_b, long ram = 1) {
  std::uniform_int_distribution<int> na(0, max_a * static_cast<int>(ram)), nb(0, max_b), nc(-5, 5);
  PuiseuxPoly p;
  for (int i = 0; i < terms; ++i) {
    int c = nc(rng);
    if (c == 0) continue;
    p.add_term(make_rational(c, 1 + (i % 3)), make_rational(na(rng), ram), nb(rng));
  }
  return p;
}

inline UPoly random_upoly(std::mt19937_64& rng, int degree) {
  std::uniform_int_distribution<int> nc(-6, 6);
  std::vector<Rational> c(static_cast<std::size_t>(degree) + 1);
  for (auto& v : c) v = nc(rng);
  if (c.back() == 0) c.back() = 1;
  return UPoly(c);
}

}  // namespace nsub::test
