#pragma once

#include <string>
#include <string_view>

#include <gmpxx.h>

namespace gsm {

using BigInt = mpz_class;
using Rational = mpq_class;

// Exact value of a finite double. Throws DomainError on NaN/inf.
Rational exact_rational(double x);

// Parses "7", "-3/4", "0.125", "1e-3", "2.5E2" into an exact rational.
// Decimal strings are read exactly (0.1 is 1/10, not the nearest double).
Rational parse_rational(std::string_view text);

double to_double(const Rational& q);

// Correctly rounded to ~106 bits, then to long double.
long double to_long_double(const Rational& q);

std::string to_string(const Rational& q);

Rational clamp01(const Rational& q);

}  // namespace gsm
