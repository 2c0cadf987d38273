#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lamcert/errors.hpp"
#include "lamcert/fuzz.hpp"
#include "lamcert/kernels.hpp"
#include "lamcert/matrix.hpp"
#include "lamcert/rational.hpp"

using namespace lamcert;

namespace {

IncidenceMatrix mat(const std::vector<std::vector<long>>& rows) {
  std::vector<std::vector<BigInt>> big;
  for (const auto& row : rows) big.emplace_back(row.begin(), row.end());
  return IncidenceMatrix::from_rows(big);
}

}  // namespace

TEST_CASE("rational parsing and canonical form") {
  CHECK(rational_from_string("3/4") == make_rational(3, 4));
  CHECK(rational_from_string("6/8") == make_rational(3, 4));
  CHECK(rational_from_string("7") == Rational(7));
  CHECK(rational_to_string(make_rational(6, 8)) == "3/4");
  CHECK(rational_to_string(Rational(5)) == "5");
  CHECK_THROWS_AS(rational_from_string("1/0"), Error);
  CHECK_THROWS_AS(rational_from_string("a/b"), Error);
  CHECK_THROWS_AS(rational_from_string("1.5"), Error);
  CHECK_THROWS_AS(rational_from_string(""), Error);
}

TEST_CASE("rational powers, including negative exponents") {
  CHECK(rational_pow(Rational(2), 10) == Rational(1024));
  CHECK(rational_pow(Rational(2), -2) == make_rational(1, 4));
  CHECK(rational_pow(make_rational(3, 2), 3) == make_rational(27, 8));
  CHECK(rational_pow(make_rational(2, 3), -1) == make_rational(3, 2));
  CHECK(rational_pow(Rational(17), 0) == Rational(1));
  CHECK_THROWS_AS(rational_pow(Rational(0), -1), Error);
}

TEST_CASE("index subset validation") {
  CHECK_THROWS_AS(IndexSubset({}, 3), Error);
  CHECK_THROWS_AS(IndexSubset({3}, 3), Error);
  CHECK_THROWS_AS(IndexSubset({1, 1}, 3), Error);
  IndexSubset s({2, 0}, 3);
  CHECK(s.indices() == std::vector<std::size_t>{0, 2});
  CHECK(s.contains(0));
  CHECK(!s.contains(1));
}

TEST_CASE("submatrix and extract") {
  IncidenceMatrix m = mat({{1, 1, 0}, {1, 1, 0}, {5, 0, 2}});
  CHECK(submatrix(m, IndexSubset({0, 1, 2}, 3)) == m);
  CHECK(submatrix(mat({{1, 2}, {3, 4}}), IndexSubset({1}, 2)) == mat({{4}}));
  CHECK(submatrix(m, IndexSubset({0, 1}, 3)) == mat({{1, 1}, {1, 1}}));
  WeightVector v{Rational(1), Rational(1), Rational(7)};
  CHECK(extract(v, IndexSubset({0, 1}, 3)) == WeightVector{Rational(1), Rational(1)});
}

TEST_CASE("row copy") {
  IncidenceMatrix m = mat({{1, 2}, {3, 4}});
  CHECK(row_copy(m, 0, 0) == m);
  CHECK(row_copy(m, 1, 0) == mat({{3, 4}, {3, 4}}));
  CHECK(row_copy(row_copy(m, 1, 0), 1, 0) == row_copy(m, 1, 0));
  CHECK_THROWS_AS(row_copy(m, 2, 0), Error);

  // Rows other than the destination stay bitwise identical.
  fuzz::Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    IncidenceMatrix r = fuzz::random_irreducible(rng, 2, 6, 4);
    std::size_t src = rng.below(r.dim()), dst = rng.below(r.dim());
    IncidenceMatrix copied = row_copy(r, src, dst);
    for (std::size_t i = 0; i < r.dim(); ++i)
      if (i != dst) CHECK(copied.rows_equal(i, r, i));
    CHECK(copied.rows_equal(dst, r, src));
  }
}

TEST_CASE("matrix validation rejects bad rows") {
  CHECK_THROWS_AS(IncidenceMatrix::from_rows({}), Error);
  CHECK_THROWS_AS(IncidenceMatrix::from_rows({{BigInt(1), BigInt(2)}}), Error);
  CHECK_THROWS_AS(IncidenceMatrix::from_rows({{BigInt(-1)}}), Error);
}

TEST_CASE("parallel kernels agree with the serial reference") {
  fuzz::Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 1 + rng.below(40);
    IncidenceMatrix a(n), b(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        a.at(i, j) = rng.below(1000);
        b.at(i, j) = rng.below(1000);
        // Mix in some large entries so the bignum paths are exercised.
        if (rng.one_in(7)) a.at(i, j) = BigInt(rng.next()) * BigInt(rng.next());
      }
    IncidenceMatrix serial(n), parallel(n);
    mat_mul_serial(a, b, serial);
    mat_mul_parallel(a, b, parallel);
    CHECK(serial == parallel);

    std::vector<BigInt> v;
    for (std::size_t i = 0; i < n; ++i) v.emplace_back(rng.below(1 << 20));
    CHECK(mat_vec_serial(a, v) == mat_vec_parallel(a, v));

    WeightVector w;
    for (std::size_t i = 0; i < n; ++i)
      w.push_back(make_rational(rng.range(1, 500), rng.range(1, 500)));
    CHECK(mat_vec_serial(a, w) == mat_vec_parallel(a, w));
  }
}

TEST_CASE("matrix powers via repeated squaring") {
  IncidenceMatrix fib = mat({{1, 1}, {1, 0}});
  IncidenceMatrix direct = fib;
  for (int p = 2; p <= 10; ++p) {
    direct = mat_mul(direct, fib);
    CHECK(mat_pow(fib, p) == direct);
  }
  CHECK(mat_pow(fib, 0) == IncidenceMatrix::identity(2));
  // Fibonacci growth as a sanity anchor: (M^10)_(0,0) = F_11 = 89.
  CHECK(mat_pow(fib, 10).at(0, 0) == 89);
}

TEST_CASE("kernel dimension mismatches are rejected") {
  IncidenceMatrix a = mat({{1}});
  IncidenceMatrix b = mat({{1, 0}, {0, 1}});
  CHECK_THROWS_AS(mat_mul(a, b), Error);
  CHECK_THROWS_AS(mat_vec(a, std::vector<BigInt>{BigInt(1), BigInt(2)}), Error);
}
