#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lamcert/kernels.hpp"
#include "lamcert/matrix.hpp"
#include "lamcert/rational.hpp"

namespace lamcert {

// Outcome of comparing M^p v against lambda^p v index by index. holds is
// equivalent to violated_indices being empty; strict and violated never
// overlap. Indices are 0-based.
struct SubinvarianceReport {
  bool holds = false;
  std::vector<std::size_t> strict_indices;
  std::vector<std::size_t> violated_indices;
};

// Certified rational bracket of a spectral radius. The bounds are the
// Collatz–Wielandt values of the stored witness: lower = min_i (Mw)_i/w_i,
// upper = max_i (Mw)_i/w_i, so anyone can recompute them.
struct PerronCertificate {
  Rational lower;
  Rational upper;
  WeightVector witness;
  std::size_t iterations = 0;
  bool width_reached = false;

  Rational width() const { return upper - lower; }
};

// True iff the digraph with an edge i -> j whenever M_(i,j) > 0 is strongly
// connected. A 1x1 matrix is a single-vertex digraph and counts as strongly
// connected even with a zero entry.
bool is_irreducible(const IncidenceMatrix& m);

// Strongly connected components of the incidence digraph, ordered by their
// smallest member; members sorted.
std::vector<IndexSubset> scc_decompose(const IncidenceMatrix& m);

// Certified bracket for the Perron root of an irreducible matrix. The
// iteration runs on the shifted matrix M+I so that periodic matrices
// converge too; the per-component identity ((M+I)w)_i/w_i = (Mw)_i/w_i + 1
// makes the shift exact on the reported bounds. The applied operator is
// squared as the iteration proceeds, which accelerates convergence while
// keeping the usual monotone bound guarantees (each squared application is
// a finite composition of single steps).
//
// Stops when upper - lower < target_width or on hitting max_iterations
// (width_reached records which). Throws Error("NotIrreducible") if the
// precondition fails; a positive start witness may be supplied to seed the
// bracket (e.g. with a subinvariant vector).
PerronCertificate perron_bounds(const IncidenceMatrix& m, std::size_t max_iterations,
                                const Rational& target_width,
                                const WeightVector* start = nullptr);

// Exact verdict on Mv <= lambda v. strict_indices collects i with
// (Mv)_i < lambda v_i. Throws Error("DimensionMismatch").
SubinvarianceReport check_subinvariance(const IncidenceMatrix& m, const WeightVector& v,
                                        const Rational& lambda);

// Report for M^p v vs lambda^p v. Requires check_subinvariance to hold; a
// violation then is impossible for correct arithmetic, so it is raised as
// Error("LemmaViolation") rather than returned.
SubinvarianceReport power_subinvariance(const IncidenceMatrix& m, const WeightVector& v,
                                        const Rational& lambda, std::size_t p);

// Verifies the chain N^p v <= M^p v <= lambda^p v given the preconditions
// Nv <= Mv and Mv <= lambda v (Error("PreconditionFailed") otherwise).
// strict_indices marks i with (M^p v)_i < lambda^p v_i. The chain is
// verified, not assumed: it is reported honestly in violated_indices if it
// fails (the single-matrix power lemma is a theorem; the two-matrix chain
// additionally needs N <= M entrywise to be guaranteed).
SubinvarianceReport dominated_power_check(const IncidenceMatrix& n, const IncidenceMatrix& m,
                                          const WeightVector& v, const Rational& lambda,
                                          std::size_t p);

struct StrictDrop {
  std::size_t power = 0;  // smallest p with a strict index inside the subset
  std::size_t index = 0;  // 0-based index into the full matrix
};

// Searches p = 1..p_max for (M^p v)_i < lambda^p v_i at some i in the
// subset; such a drop certifies that the (irreducible) submatrix has
// spectral radius strictly below lambda. Requires Mv <= lambda v and
// submatrix(m, subset) irreducible (Error("SubmatrixNotIrreducible")).
std::optional<StrictDrop> submatrix_strict_drop(const IncidenceMatrix& m,
                                                const IndexSubset& subset,
                                                const WeightVector& v, const Rational& lambda,
                                                std::size_t p_max);

// Smallest q >= 1 with (M^q)_(j,1) > 0, i.e. the shortest walk from j to
// vertex 0. Capped at dim; exceeding the cap means M was not irreducible
// and raises Error("NotIrreducible").
std::size_t first_reach(const IncidenceMatrix& m, std::size_t j);

// Checks the row-stability consequence of changing only the first row:
// for every j >= 1 and every 1 <= p <= first_reach(m, j), row j of mbar^p
// must equal row j of m^p exactly. Throws Error("PreconditionFailed") if
// mbar differs from m outside row 0.
bool propagation_check(const IncidenceMatrix& m, const IncidenceMatrix& mbar);

// lambda^p v, componentwise.
WeightVector scale_pow(const WeightVector& v, const Rational& lambda, std::size_t p);

}  // namespace lamcert
