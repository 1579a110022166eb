#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace nsub {

using Integer = mpz_class;
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);

/// Parses "p/q", "-p/q" or a plain integer. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Canonical string: "n" for integers, "p/q" otherwise (always reduced).
std::string to_string(const Rational& q);

bool is_integer(const Rational& q);
Integer floor(const Rational& q);
Integer ceil(const Rational& q);
Rational abs(const Rational& q);
int sign(const Rational& q);
double to_double(const Rational& q);
long double to_long_double(const Rational& q);

/// Exact conversion of a finite double (every finite double is dyadic).
Rational from_double(double v);

Rational pow(const Rational& base, long exponent);

/// lcm of the denominator and n.
long lcm_denominator(long n, const Rational& q);

/// Simplest rational (smallest denominator) in the closed interval [lo, hi].
Rational simplest_between(const Rational& lo, const Rational& hi);

/// Rounds q to the nearest multiple of 2^-bits.
Rational round_dyadic(const Rational& q, unsigned bits);

}  // namespace nsub
