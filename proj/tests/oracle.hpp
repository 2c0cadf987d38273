#pragma once

// Test-only oracle for spectral radii: characteristic polynomial by exact
// cofactor expansion, Sturm chains for certified real-root counting, and
// bisection bracketing of the largest real root. Deliberately independent
// of the iteration machinery it is used to check.

#include <vector>

#include "lamcert/matrix.hpp"
#include "lamcert/rational.hpp"

namespace oracle {

// Coefficient list, index = degree.
using Poly = std::vector<lamcert::Rational>;

Poly char_poly(const lamcert::IncidenceMatrix& m);
lamcert::Rational eval(const Poly& p, const lamcert::Rational& x);

// Sturm chain of the squarefree part of p.
std::vector<Poly> sturm_chain(const Poly& p);

// Number of distinct real roots in the half-open interval (a, b].
long roots_in(const std::vector<Poly>& chain, const lamcert::Rational& a,
              const lamcert::Rational& b);
// Number of distinct real roots in (a, +infinity).
long roots_above(const std::vector<Poly>& chain, const lamcert::Rational& a);

struct RootBracket {
  lamcert::Rational lower;  // largest real root lies in (lower, upper]
  lamcert::Rational upper;
};

// Certified bracket of width < width around the largest real root of the
// characteristic polynomial (the Perron root for irreducible input).
RootBracket largest_real_root(const lamcert::IncidenceMatrix& m,
                              const lamcert::Rational& width);

// True iff the largest real root of m's characteristic polynomial lies in
// [lo, hi], certified by Sturm counts.
bool bracket_contains_largest_root(const lamcert::IncidenceMatrix& m,
                                   const lamcert::Rational& lo, const lamcert::Rational& hi);

}  // namespace oracle
