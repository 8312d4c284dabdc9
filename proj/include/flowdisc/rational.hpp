#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace flowdisc {

/// Exact rational number. Every time, processing time, LP coefficient and
/// discrepancy value in the library is one of these.
using Rational = mpq_class;

/// Parses "num/den" or "num" (optionally signed). Throws ValidationError.
Rational parse_rational(std::string_view text);

/// Canonical "num/den" form; the denominator is always printed, so
/// parse_rational(to_string(q)) == q and the text round-trips byte for byte.
std::string to_string(const Rational& q);

double to_double(const Rational& q);

/// 2^e for any integer e (negative exponents give 1/2^|e|).
Rational pow2(int e);

/// Smallest integer k with q <= 2^k. Requires q > 0.
int ceil_log2(const Rational& q);

/// True iff q is an integer multiple of 1/2^level.
bool is_dyadic_multiple(const Rational& q, int level);

/// floor(q * 2^level) / 2^level.
Rational floor_to_dyadic(const Rational& q, int level);

Rational abs(const Rational& q);

/// Least common multiple of the denominators.
mpz_class lcm_of_denominators(const std::vector<Rational>& values);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

}  // namespace flowdisc
