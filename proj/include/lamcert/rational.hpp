#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace lamcert {

// All scalar certificate arithmetic is exact. GMP's canonical form already
// guarantees reduced fractions with positive denominators.
using BigInt = mpz_class;
using Rational = mpq_class;

// Weight vectors hold the nonnegative rational weights attached to discs
// and surfaces. Length is validated against the companion matrix at each
// operation boundary.
using WeightVector = std::vector<Rational>;

// Parses "p/q" or "p" (optionally signed). Throws Error("BadRational") on
// malformed text or zero denominator.
Rational rational_from_string(const std::string& text);

// mpq_class(p, q) does not reduce; GMP arithmetic assumes canonical
// operands, so every ratio built from raw parts must go through here.
Rational make_rational(long num, long den);

// Canonical text form: "p" when the denominator is 1, else "p/q".
std::string rational_to_string(const Rational& value);

// Exact integer power; exp may be negative (base must be nonzero then).
Rational rational_pow(const Rational& base, long exp);

// Display helper only; certificates never depend on this.
double rational_to_double(const Rational& value);

bool is_nonnegative(const WeightVector& v);
bool is_strictly_positive(const WeightVector& v);
bool is_zero(const WeightVector& v);

}  // namespace lamcert
