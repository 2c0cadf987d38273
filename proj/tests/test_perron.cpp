#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lamcert/errors.hpp"
#include "lamcert/fuzz.hpp"
#include "lamcert/perron.hpp"
#include "oracle.hpp"

using namespace lamcert;

namespace {

IncidenceMatrix mat(const std::vector<std::vector<long>>& rows) {
  std::vector<std::vector<BigInt>> big;
  for (const auto& row : rows) big.emplace_back(row.begin(), row.end());
  return IncidenceMatrix::from_rows(big);
}

WeightVector vec(const std::vector<std::string>& entries) {
  WeightVector v;
  for (const auto& e : entries) v.push_back(rational_from_string(e));
  return v;
}

// Independent strong-connectivity check: boolean reachability through walk
// lengths up to n.
bool brute_strongly_connected(const IncidenceMatrix& m) {
  const std::size_t n = m.dim();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) reach[i][j] = m.at(i, j) > 0;
  for (std::size_t step = 0; step < n; ++step)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        if (reach[i][k])
          for (std::size_t j = 0; j < n; ++j)
            if (reach[k][j]) reach[i][j] = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && !reach[i][j]) return false;
  return true;
}

const Rational kTight = rational_pow(Rational(1, 10), 9);

}  // namespace

TEST_CASE("irreducibility matches the digraph definition") {
  CHECK(is_irreducible(mat({{0, 1}, {1, 0}})));
  CHECK(!is_irreducible(mat({{1, 1}, {0, 1}})));
  CHECK(is_irreducible(mat({{1, 1}, {1, 0}})));
  // A single vertex is strongly connected even without a self-loop.
  CHECK(is_irreducible(mat({{0}})));

  fuzz::Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    IncidenceMatrix m(2 + rng.below(5));
    for (std::size_t i = 0; i < m.dim(); ++i)
      for (std::size_t j = 0; j < m.dim(); ++j)
        if (rng.one_in(3)) m.at(i, j) = rng.range(0, 2);
    CHECK(is_irreducible(m) == brute_strongly_connected(m));
  }
}

TEST_CASE("perron bounds on exact and periodic cases") {
  PerronCertificate one = perron_bounds(mat({{2}}), 10, kTight);
  CHECK(one.lower == Rational(2));
  CHECK(one.upper == Rational(2));

  PerronCertificate swap = perron_bounds(mat({{0, 1}, {1, 0}}), 500, kTight);
  CHECK(swap.lower <= Rational(1));
  CHECK(swap.upper >= Rational(1));
  CHECK(swap.width() < kTight);

  CHECK_THROWS_AS(perron_bounds(mat({{1, 1}, {0, 1}}), 10, kTight), Error);
}

TEST_CASE("perron bounds bracket the golden ratio") {
  PerronCertificate cert = perron_bounds(mat({{1, 1}, {1, 0}}), 500, kTight);
  CHECK(cert.width() < kTight);
  oracle::RootBracket root = oracle::largest_real_root(mat({{1, 1}, {1, 0}}), rational_pow(Rational(1, 10), 12));
  // Both brackets contain the same algebraic number.
  CHECK(cert.lower <= root.upper);
  CHECK(root.lower <= cert.upper);
  CHECK(oracle::bracket_contains_largest_root(mat({{1, 1}, {1, 0}}), cert.lower, cert.upper));
  // x^2 - x - 1 has its positive root at about 1.6180339887.
  CHECK(cert.lower > make_rational(161803398, 100000000));
  CHECK(cert.upper < make_rational(161803399, 100000000));
}

TEST_CASE("certificate is the Collatz–Wielandt data of its witness") {
  fuzz::Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    IncidenceMatrix m = fuzz::random_irreducible(rng, 1, 6, 3);
    PerronCertificate cert = perron_bounds(m, 500, kTight);
    REQUIRE(is_strictly_positive(cert.witness));
    WeightVector image = mat_vec(m, cert.witness);
    Rational lo, hi;
    for (std::size_t i = 0; i < image.size(); ++i) {
      Rational ratio = image[i] / cert.witness[i];
      if (i == 0 || ratio < lo) lo = ratio;
      if (i == 0 || ratio > hi) hi = ratio;
    }
    CHECK(cert.lower == lo);
    CHECK(cert.upper == hi);
    CHECK(oracle::bracket_contains_largest_root(m, cert.lower, cert.upper));
  }
}

TEST_CASE("random positive vectors sandwich the oracle root") {
  fuzz::Rng rng(555);
  for (int trial = 0; trial < 60; ++trial) {
    IncidenceMatrix m = fuzz::random_irreducible(rng, 1, 6, 3);
    WeightVector w(m.dim());
    for (auto& x : w) x = make_rational(rng.range(1, 12), rng.range(1, 5));
    WeightVector y = mat_vec(m, w);
    Rational lo, hi;
    for (std::size_t i = 0; i < w.size(); ++i) {
      Rational ratio = y[i] / w[i];
      if (i == 0 || ratio < lo) lo = ratio;
      if (i == 0 || ratio > hi) hi = ratio;
    }
    CHECK(oracle::bracket_contains_largest_root(m, lo, hi));
  }
}

TEST_CASE("bounds are monotone across iteration budgets") {
  IncidenceMatrix m = mat({{2, 1, 0}, {0, 1, 3}, {1, 0, 1}});
  Rational last_lower(-1), last_upper(1000);
  for (std::size_t budget = 0; budget <= 12; ++budget) {
    PerronCertificate cert = perron_bounds(m, budget, Rational(0));
    CHECK(cert.lower >= last_lower);
    CHECK(cert.upper <= last_upper);
    last_lower = cert.lower;
    last_upper = cert.upper;
  }
}

TEST_CASE("subinvariance reports") {
  SubinvarianceReport a =
      check_subinvariance(mat({{1, 1}, {1, 0}}), vec({"2", "1"}), Rational(2));
  CHECK(a.holds);
  CHECK(a.strict_indices == std::vector<std::size_t>{0});

  SubinvarianceReport b = check_subinvariance(IncidenceMatrix::identity(2), vec({"1", "1"}),
                                              Rational(1));
  CHECK(b.holds);
  CHECK(b.strict_indices.empty());

  SubinvarianceReport c =
      check_subinvariance(mat({{0, 2}, {2, 0}}), vec({"1", "1"}), Rational(1));
  CHECK(!c.holds);
  CHECK(c.violated_indices == std::vector<std::size_t>{0, 1});

  CHECK_THROWS_AS(check_subinvariance(mat({{1}}), vec({"1", "1"}), Rational(1)), Error);
}

TEST_CASE("subinvariance pins the perron bounds below lambda") {
  // Proposition-style consequence: Mv <= lambda v gives lambda(M) <= lambda,
  // and a strict index pushes the certified upper bound strictly below.
  IncidenceMatrix m = mat({{1, 1}, {1, 0}});
  WeightVector v = vec({"2", "1"});
  REQUIRE(check_subinvariance(m, v, Rational(2)).holds);
  PerronCertificate cert = perron_bounds(m, 500, kTight, &v);
  CHECK(cert.lower <= Rational(2));
  CHECK(cert.upper < Rational(2));
}

TEST_CASE("power subinvariance") {
  IncidenceMatrix m = mat({{1, 1}, {1, 0}});
  WeightVector v = vec({"2", "1"});
  // Direct route: Mv = (3,2), M^2 v = (5,3), M^3 v = (8,5), against
  // lambda^3 v = (16, 8).
  WeightVector x = v;
  for (int k = 0; k < 3; ++k) x = mat_vec(m, x);
  CHECK(x == vec({"8", "5"}));
  SubinvarianceReport rep = power_subinvariance(m, v, Rational(2), 3);
  CHECK(rep.holds);
  CHECK(rep.strict_indices == std::vector<std::size_t>{0, 1});

  SubinvarianceReport id = power_subinvariance(IncidenceMatrix::identity(2), vec({"1", "1"}),
                                               Rational(1), 5);
  CHECK(id.holds);
  CHECK(id.strict_indices.empty());

  SubinvarianceReport per =
      power_subinvariance(mat({{0, 1}, {1, 0}}), vec({"1", "1"}), Rational(1), 2);
  CHECK(per.holds);
  CHECK(per.strict_indices.empty());

  CHECK_THROWS_AS(power_subinvariance(mat({{0, 2}, {2, 0}}), vec({"1", "1"}), Rational(1), 2),
                  Error);
}

TEST_CASE("power subinvariance holds on random instances for all p <= 8") {
  fuzz::Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    IncidenceMatrix m = fuzz::random_irreducible(rng, 1, 5, 3);
    PerronCertificate cert = perron_bounds(m, 200, make_rational(1, 1000));
    for (std::size_t p = 1; p <= 8; ++p)
      CHECK(power_subinvariance(m, cert.witness, cert.upper, p).holds);
  }
}

TEST_CASE("dominated power check") {
  IncidenceMatrix m = mat({{1, 1}, {1, 0}});
  WeightVector v = vec({"2", "1"});
  SubinvarianceReport same = dominated_power_check(m, m, v, Rational(2), 2);
  CHECK(same.holds);
  CHECK(same.strict_indices == std::vector<std::size_t>{0, 1});  // M^2 v = (5,3) < (8,4)

  IncidenceMatrix zero(2);
  SubinvarianceReport dom = dominated_power_check(zero, m, v, Rational(2), 1);
  CHECK(dom.holds);
  CHECK(dom.strict_indices == std::vector<std::size_t>{0});  // (Mv)_1 = 3 < 4

  IncidenceMatrix ones = mat({{1, 1}, {1, 1}});
  IncidenceMatrix cut = mat({{1, 0}, {1, 1}});
  SubinvarianceReport red = dominated_power_check(cut, ones, vec({"1", "1"}), Rational(2), 1);
  CHECK(red.holds);
  CHECK(red.strict_indices.empty());  // strictness is measured on M, not N
  WeightVector nv = mat_vec(cut, vec({"1", "1"}));
  CHECK(nv[0] == Rational(1));  // (Nv)_1 = 1 < 2

  CHECK_THROWS_AS(dominated_power_check(ones, cut, vec({"1", "1"}), Rational(2), 1), Error);
}

TEST_CASE("submatrix strict drop") {
  IncidenceMatrix m = mat({{1, 1}, {1, 0}});
  auto drop = submatrix_strict_drop(m, IndexSubset({0, 1}, 2), vec({"2", "1"}), Rational(2), 8);
  REQUIRE(drop.has_value());
  CHECK(drop->power == 1);
  CHECK(drop->index == 0);

  // Transitive permutation: all equalities, nothing to find.
  IncidenceMatrix perm = mat({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
  CHECK(!submatrix_strict_drop(perm, IndexSubset({0, 1, 2}, 3), vec({"1", "1", "1"}), Rational(1), 12)
             .has_value());

  // The tightened matrix of the worked instance, restricted to its middle
  // component: strictness arrives at power 2.
  IncidenceMatrix mhat = mat({{1, 0, 0}, {1, 1, 0}, {1, 0, 0}});
  auto scc = submatrix_strict_drop(mhat, IndexSubset({1}, 3), vec({"1", "1", "3/4"}), Rational(2), 12);
  REQUIRE(scc.has_value());
  CHECK(scc->power == 2);
  CHECK(scc->index == 1);

  CHECK_THROWS_AS(
      submatrix_strict_drop(mat({{1, 1}, {1, 1}}), IndexSubset({0, 1}, 2), vec({"1", "1"}),
                            make_rational(1, 2), 4),
      Error);
}

TEST_CASE("first reach") {
  IncidenceMatrix fib = mat({{1, 1}, {1, 0}});
  CHECK(first_reach(fib, 0) == 1);
  CHECK(first_reach(fib, 1) == 1);

  IncidenceMatrix swap = mat({{0, 1}, {1, 0}});
  CHECK(first_reach(swap, 0) == 2);
  CHECK(first_reach(swap, 1) == 1);

  IncidenceMatrix cycle = mat({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
  CHECK(first_reach(cycle, 2) == 1);
  CHECK(first_reach(cycle, 1) == 2);
  CHECK(first_reach(cycle, 0) == 3);

  CHECK_THROWS_AS(first_reach(mat({{1, 1}, {0, 1}}), 1), Error);
}

TEST_CASE("propagation check") {
  IncidenceMatrix cycle = mat({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
  CHECK(propagation_check(cycle, cycle));

  IncidenceMatrix replaced = row_copy(cycle, 0, 0);
  for (std::size_t j = 0; j < 3; ++j) replaced.at(0, j) = 1;
  // Row 2 of the square stays (1,0,0) under the replacement.
  IncidenceMatrix square = mat_mul(replaced, replaced);
  CHECK(square.at(1, 0) == 1);
  CHECK(square.at(1, 1) == 0);
  CHECK(square.at(1, 2) == 0);
  CHECK(propagation_check(cycle, replaced));

  IncidenceMatrix swap = mat({{0, 1}, {1, 0}});
  IncidenceMatrix loud = mat({{5, 7}, {1, 0}});
  CHECK(propagation_check(swap, loud));

  IncidenceMatrix off = mat({{0, 1}, {2, 0}});
  CHECK_THROWS_AS(propagation_check(swap, off), Error);
}

TEST_CASE("propagation holds under random first-row replacement") {
  fuzz::Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    IncidenceMatrix m = fuzz::random_irreducible(rng, 2, 8, 3);
    IncidenceMatrix mbar = m;
    for (std::size_t j = 0; j < m.dim(); ++j) mbar.at(0, j) = rng.range(0, 3);
    CHECK(propagation_check(m, mbar));
  }
}

TEST_CASE("scc decomposition") {
  auto whole = scc_decompose(mat({{1, 1}, {1, 0}}));
  REQUIRE(whole.size() == 1);
  CHECK(whole[0].indices() == std::vector<std::size_t>{0, 1});

  auto split = scc_decompose(mat({{1, 1}, {0, 1}}));
  REQUIRE(split.size() == 2);
  CHECK(split[0].indices() == std::vector<std::size_t>{0});
  CHECK(split[1].indices() == std::vector<std::size_t>{1});

  auto worked = scc_decompose(mat({{1, 0, 0}, {1, 1, 0}, {1, 0, 0}}));
  REQUIRE(worked.size() == 3);
  CHECK(worked[0].indices() == std::vector<std::size_t>{0});
  CHECK(worked[1].indices() == std::vector<std::size_t>{1});
  CHECK(worked[2].indices() == std::vector<std::size_t>{2});
}

TEST_CASE("submatrix spectral radius never exceeds the full one") {
  fuzz::Rng rng(77);
  const Rational width = rational_pow(Rational(1, 10), 9);
  for (int trial = 0; trial < 40; ++trial) {
    IncidenceMatrix m = fuzz::random_irreducible(rng, 2, 5, 3);
    oracle::RootBracket full = oracle::largest_real_root(m, width);
    for (std::size_t mask = 1; mask + 1 < (1u << m.dim()); ++mask) {
      std::vector<std::size_t> keep;
      for (std::size_t i = 0; i < m.dim(); ++i)
        if (mask & (1u << i)) keep.push_back(i);
      IncidenceMatrix sub = submatrix(m, IndexSubset(keep, m.dim()));
      if (!is_irreducible(sub)) continue;
      oracle::RootBracket part = oracle::largest_real_root(sub, width);
      // lambda(N) > lambda(M) would force the sub bracket above the full one.
      CHECK(part.lower <= full.upper);
    }
  }
}
