#include "oracle.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace oracle {

using lamcert::BigInt;
using lamcert::IncidenceMatrix;
using lamcert::Rational;

namespace {

Poly trim(Poly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

Poly add(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return trim(out);
}

Poly mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return trim(out);
}

Poly scale(const Poly& a, const Rational& c) {
  Poly out = a;
  for (auto& x : out) x *= c;
  return trim(out);
}

Poly derivative(const Poly& p) {
  Poly out;
  for (std::size_t i = 1; i < p.size(); ++i) out.push_back(p[i] * Rational(static_cast<long>(i)));
  return trim(out);
}

// Remainder of a by b (b nonzero).
Poly rem(Poly a, const Poly& b) {
  a = trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    Rational factor = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= factor * b[i];
    a = trim(a);
  }
  return a;
}

Poly poly_gcd(Poly a, Poly b) {
  a = trim(a);
  b = trim(b);
  while (!b.empty()) {
    Poly r = rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Poly divide_exact(const Poly& a, const Poly& b) {
  Poly quotient(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rational(0));
  Poly rest = a;
  while (rest.size() >= b.size() && !rest.empty()) {
    Rational factor = rest.back() / b.back();
    std::size_t shift = rest.size() - b.size();
    quotient[shift] = factor;
    for (std::size_t i = 0; i < b.size(); ++i) rest[i + shift] -= factor * b[i];
    rest = trim(rest);
  }
  assert(rest.empty());
  return trim(quotient);
}

int sign_of(const Rational& x) { return x > 0 ? 1 : x < 0 ? -1 : 0; }

int variations(const std::vector<Poly>& chain, const Rational& x) {
  int count = 0, last = 0;
  for (const auto& p : chain) {
    int s = sign_of(eval(p, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

int variations_at_infinity(const std::vector<Poly>& chain) {
  int count = 0, last = 0;
  for (const auto& p : chain) {
    if (p.empty()) continue;
    int s = sign_of(p.back());
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

}  // namespace

Poly char_poly(const IncidenceMatrix& m) {
  const std::size_t n = m.dim();
  if (n > 20) throw std::invalid_argument("oracle char_poly meant for small matrices");

  // Entries of xI - M as degree <= 1 polynomials.
  auto entry = [&](std::size_t i, std::size_t j) -> Poly {
    Rational c(-Rational(m.at(i, j)));
    if (i == j) {
      Poly p{c, Rational(1)};
      return trim(p);
    }
    return trim(Poly{c});
  };

  // det over column subsets: dp[S] = det(rows 0..|S|-1, cols of S).
  std::vector<Poly> dp(1u << n);
  dp[0] = Poly{Rational(1)};
  for (std::size_t mask = 1; mask < dp.size(); ++mask) {
    std::size_t r = static_cast<std::size_t>(__builtin_popcountll(mask)) - 1;
    Poly det;
    std::size_t pos = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (!(mask & (1u << c))) continue;
      Poly term = mul(entry(r, c), dp[mask & ~(1u << c)]);
      det = add(det, (pos % 2 == (r % 2)) ? term : scale(term, Rational(-1)));
      ++pos;
    }
    dp[mask] = std::move(det);
  }
  return dp[(1u << n) - 1];
}

Rational eval(const Poly& p, const Rational& x) {
  Rational value(0);
  for (std::size_t i = p.size(); i-- > 0;) value = value * x + p[i];
  return value;
}

std::vector<Poly> sturm_chain(const Poly& p) {
  Poly base = trim(p);
  if (base.empty()) return {};
  Poly d = derivative(base);
  Poly g = poly_gcd(base, d);
  if (g.size() > 1) base = divide_exact(base, g);  // squarefree part

  std::vector<Poly> chain{base, derivative(base)};
  while (!chain.back().empty() && chain.back().size() > 1) {
    Poly r = rem(chain[chain.size() - 2], chain.back());
    if (r.empty()) break;
    chain.push_back(scale(r, Rational(-1)));
  }
  return chain;
}

long roots_in(const std::vector<Poly>& chain, const Rational& a, const Rational& b) {
  return variations(chain, a) - variations(chain, b);
}

long roots_above(const std::vector<Poly>& chain, const Rational& a) {
  return variations(chain, a) - variations_at_infinity(chain);
}

RootBracket largest_real_root(const IncidenceMatrix& m, const Rational& width) {
  Poly p = char_poly(m);
  auto chain = sturm_chain(p);

  Rational top(1);
  for (const BigInt& s : m.row_sums())
    if (Rational(s) + 1 > top) top = Rational(s) + 1;
  if (roots_above(chain, top) != 0)
    throw std::logic_error("oracle: root above the row-sum bound");

  Rational lo(-1), hi = top;
  if (roots_in(chain, lo, hi) < 1) throw std::logic_error("oracle: no real root found");
  while (hi - lo >= width) {
    Rational mid = (lo + hi) / 2;
    if (roots_in(chain, mid, hi) >= 1)
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi};
}

bool bracket_contains_largest_root(const IncidenceMatrix& m, const Rational& lo,
                                   const Rational& hi) {
  Poly p = char_poly(m);
  auto chain = sturm_chain(p);
  if (roots_above(chain, hi) != 0) return false;       // largest root > hi
  if (roots_above(chain, lo) >= 1) return true;        // some root > lo, hence in (lo, hi]
  return eval(chain.front(), lo) == 0;                 // lo itself is the largest root
}

}  // namespace oracle
