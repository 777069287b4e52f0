// Exact rational scalar type and conversions used throughout the library.
#ifndef HBCERT_RATIONAL_HPP
#define HBCERT_RATIONAL_HPP

#include <gmpxx.h>

#include <string>

namespace hbcert {

using Rational = mpq_class;
using Integer = mpz_class;

// Parse "p", "-p", or "p/q" (q > 0 after canonicalization). Throws
// ParseError on malformed input or zero denominator.
Rational parse_rational(const std::string& text);

// Canonical "p" or "p/q" form, matching parse_rational.
std::string to_string(const Rational& q);

// Nearest double; GMP truncates toward zero, which is fine for display but
// not for one-sided bounds. Callers needing an upper bound use round_up.
double to_double(const Rational& q);

// Smallest double >= q: converts (GMP truncates toward zero) and bumps
// upward while still exactly below q, so representable values round-trip.
double to_double_round_up(const Rational& q);

// Smallest double d with d*d >= q (exact check); q must be >= 0.
double sqrt_round_up(const Rational& q);

// Exact rational from the 17-digit decimal expansion of a double -- the exact
// binary value, no decimal snapping.
Rational exact_from_double(double x);

// Rational from the value's decimal snapshot with `digits` significant
// digits, e.g. snap(0.7440456581..., 12) = 7440456581/10^10 after reduction.
Rational snap_to_decimal(double x, int digits = 12);

Rational pow(const Rational& base, unsigned e);

}  // namespace hbcert

#endif
