#include "lamcert/matrix.hpp"

#include <algorithm>
#include <string>

#include "lamcert/errors.hpp"

namespace lamcert {

IncidenceMatrix IncidenceMatrix::identity(std::size_t n) {
  IncidenceMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IncidenceMatrix IncidenceMatrix::from_rows(const std::vector<std::vector<BigInt>>& rows) {
  std::size_t n = rows.size();
  if (n == 0) throw Error("InvariantViolation", "matrix must have dimension >= 1");
  IncidenceMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n)
      throw Error("InvariantViolation",
                  "row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                      " entries, expected " + std::to_string(n));
    for (std::size_t j = 0; j < n; ++j) {
      if (rows[i][j] < 0)
        throw Error("InvariantViolation", "negative entry at (" + std::to_string(i + 1) + "," +
                                              std::to_string(j + 1) + ")");
      m.at(i, j) = rows[i][j];
    }
  }
  return m;
}

bool IncidenceMatrix::rows_equal(std::size_t i, const IncidenceMatrix& other,
                                 std::size_t j) const {
  if (n_ != other.n_) return false;
  return std::equal(row(i), row(i) + n_, other.row(j));
}

std::vector<BigInt> IncidenceMatrix::row_sums() const {
  std::vector<BigInt> sums(n_, BigInt(0));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) sums[i] += at(i, j);
  return sums;
}

IndexSubset::IndexSubset(std::vector<std::size_t> indices, std::size_t dim)
    : indices_(std::move(indices)), dim_(dim) {
  std::sort(indices_.begin(), indices_.end());
  if (indices_.empty()) throw Error("IndexOutOfRange", "index subset must be nonempty");
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (indices_[k] >= dim_)
      throw Error("IndexOutOfRange", "index " + std::to_string(indices_[k] + 1) +
                                         " exceeds dimension " + std::to_string(dim_));
    if (k > 0 && indices_[k] == indices_[k - 1])
      throw Error("IndexOutOfRange", "duplicate index " + std::to_string(indices_[k] + 1));
  }
}

bool IndexSubset::contains(std::size_t i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

IncidenceMatrix submatrix(const IncidenceMatrix& m, const IndexSubset& subset) {
  if (subset.dim() != m.dim())
    throw Error("IndexOutOfRange", "subset built for dimension " + std::to_string(subset.dim()) +
                                       ", matrix has " + std::to_string(m.dim()));
  const auto& idx = subset.indices();
  IncidenceMatrix out(idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) out.at(a, b) = m.at(idx[a], idx[b]);
  return out;
}

WeightVector extract(const WeightVector& v, const IndexSubset& subset) {
  if (subset.dim() != v.size())
    throw Error("IndexOutOfRange", "subset built for dimension " + std::to_string(subset.dim()) +
                                       ", vector has " + std::to_string(v.size()));
  WeightVector out;
  out.reserve(subset.size());
  for (std::size_t i : subset.indices()) out.push_back(v[i]);
  return out;
}

IncidenceMatrix row_copy(const IncidenceMatrix& m, std::size_t src, std::size_t dst) {
  if (src >= m.dim() || dst >= m.dim())
    throw Error("IndexOutOfRange", "row index out of range for dimension " +
                                       std::to_string(m.dim()));
  IncidenceMatrix out = m;
  if (src == dst) return out;
  std::copy(m.row(src), m.row(src) + m.dim(), out.row(dst));
  return out;
}

}  // namespace lamcert
