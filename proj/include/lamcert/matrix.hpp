#pragma once

#include <cstddef>
#include <vector>

#include "lamcert/rational.hpp"

namespace lamcert {

// Square matrix of nonnegative arbitrary-precision integers. Encodes, for a
// disc system, how many components of the image of disc i are carried by
// disc j; powers of it track iterated images, so entries must never wrap.
class IncidenceMatrix {
 public:
  IncidenceMatrix() = default;
  explicit IncidenceMatrix(std::size_t n) : n_(n), entries_(n * n, BigInt(0)) {}

  static IncidenceMatrix identity(std::size_t n);

  // Validating constructor for externally supplied rows; throws
  // Error("InvariantViolation") on non-square or negative data.
  static IncidenceMatrix from_rows(const std::vector<std::vector<BigInt>>& rows);

  std::size_t dim() const { return n_; }

  BigInt& at(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
  const BigInt& at(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }

  const BigInt* row(std::size_t i) const { return entries_.data() + i * n_; }
  BigInt* row(std::size_t i) { return entries_.data() + i * n_; }

  bool operator==(const IncidenceMatrix& other) const {
    return n_ == other.n_ && entries_ == other.entries_;
  }
  bool operator!=(const IncidenceMatrix& other) const { return !(*this == other); }

  bool rows_equal(std::size_t i, const IncidenceMatrix& other, std::size_t j) const;

  std::vector<BigInt> row_sums() const;

 private:
  std::size_t n_ = 0;
  std::vector<BigInt> entries_;
};

// Sorted, strictly increasing, nonempty set of row/column indices (0-based
// internally; serialized 1-based).
class IndexSubset {
 public:
  // Validates and sorts; throws Error("IndexOutOfRange") on duplicates,
  // emptiness, or indices >= dim.
  IndexSubset(std::vector<std::size_t> indices, std::size_t dim);

  const std::vector<std::size_t>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  std::size_t dim() const { return dim_; }
  bool contains(std::size_t i) const;

  bool operator==(const IndexSubset& other) const {
    return indices_ == other.indices_ && dim_ == other.dim_;
  }

 private:
  std::vector<std::size_t> indices_;
  std::size_t dim_;
};

// N_(a,b) = M_(i_a, i_b) for the subset I = {i_1 < ... < i_n}.
IncidenceMatrix submatrix(const IncidenceMatrix& m, const IndexSubset& subset);

// Extracts the entries of v at the subset's indices.
WeightVector extract(const WeightVector& v, const IndexSubset& subset);

// Returns m with row dst replaced by row src; everything else untouched.
IncidenceMatrix row_copy(const IncidenceMatrix& m, std::size_t src, std::size_t dst);

}  // namespace lamcert
