#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace strategem {

// Exact rationals (GMP-backed). Used for the exact numeric mode, for expert
// weights in the weighted-expert learner and for lower-bound adversary bookkeeping.
using Rational = mpq_class;

// Parses "p/q", an integer, or a plain decimal such as "0.99" into an exact
// rational. Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& value);

inline double to_double(const Rational& value) { return value.get_d(); }
inline double to_double(double value) { return value; }

// base^exponent for a non-negative integer exponent.
Rational power(const Rational& base, unsigned long exponent);

}  // namespace strategem
