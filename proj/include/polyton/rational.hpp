#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace polyton {

// mpq_class keeps every value canonical: gcd(|num|, den) = 1 and den >= 1.
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q", "-p/q" or a bare integer. Rejects fractions that are not
/// already in lowest terms and zero denominators.
Rational parse_rational(std::string_view text);

/// Like parse_rational but also accepts decimal notation ("0.1", "-2.5e-3").
/// Used for command-line scalars such as epsilons.
Rational parse_decimal(std::string_view text);

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& value);

/// Fixed-point rendering with `digits` digits after the decimal point.
std::string to_decimal(const Rational& value, int digits = 12);

/// Exact square root when `value` is the square of a rational.
std::optional<Rational> exact_sqrt(const Rational& value);

/// Largest multiple of 10^-digits that does not exceed sqrt(value); value >= 0.
Rational sqrt_floor(const Rational& value, int digits);

Rational abs(const Rational& value);

/// p/q in lowest terms; q must be nonzero.
Rational make_rational(long p, long q = 1);

/// Least common multiple of the denominators.
Integer common_denominator(const std::vector<Rational>& values);

}  // namespace polyton
