#include "lamcert/rational.hpp"

#include <algorithm>
#include <cctype>

#include "lamcert/errors.hpp"

namespace lamcert {

namespace {

bool looks_like_rational(const std::string& text) {
  if (text.empty()) return false;
  std::size_t i = 0;
  if (text[i] == '+' || text[i] == '-') ++i;
  bool digits = false;
  for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) digits = true;
  if (!digits) return false;
  if (i == text.size()) return true;
  if (text[i] != '/') return false;
  ++i;
  bool den_digits = false;
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
    den_digits = true;
  }
  return den_digits;
}

}  // namespace

Rational rational_from_string(const std::string& text) {
  if (!looks_like_rational(text))
    throw Error("BadRational", "expected \"p\" or \"p/q\", got \"" + text + "\"");
  Rational value;
  if (value.set_str(text, 10) != 0)
    throw Error("BadRational", "unparsable rational \"" + text + "\"");
  if (value.get_den() == 0)
    throw Error("BadRational", "zero denominator in \"" + text + "\"");
  value.canonicalize();
  return value;
}

Rational make_rational(long num, long den) {
  if (den == 0) throw Error("BadRational", "zero denominator");
  Rational value(num, den);
  value.canonicalize();
  return value;
}

std::string rational_to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Rational rational_pow(const Rational& base, long exp) {
  if (exp == 0) return Rational(1);
  if (base == 0 && exp < 0) throw Error("BadRational", "negative power of zero");
  Rational result;
  unsigned long mag = exp < 0 ? static_cast<unsigned long>(-(exp + 1)) + 1ul
                              : static_cast<unsigned long>(exp);
  mpz_pow_ui(result.get_num_mpz_t(), base.get_num_mpz_t(), mag);
  mpz_pow_ui(result.get_den_mpz_t(), base.get_den_mpz_t(), mag);
  if (exp < 0) {
    mpq_inv(result.get_mpq_t(), result.get_mpq_t());
  }
  result.canonicalize();
  return result;
}

double rational_to_double(const Rational& value) { return value.get_d(); }

bool is_nonnegative(const WeightVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x >= 0; });
}

bool is_strictly_positive(const WeightVector& v) {
  return !v.empty() &&
         std::all_of(v.begin(), v.end(), [](const Rational& x) { return x > 0; });
}

bool is_zero(const WeightVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

}  // namespace lamcert
