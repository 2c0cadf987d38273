#pragma once

#include <vector>

#include "lamcert/matrix.hpp"
#include "lamcert/rational.hpp"

namespace lamcert {

// The certification layer is pure and single-minded about exactness; the
// only performance lever is how the row-independent products underneath it
// are scheduled. Serial kernels are the reference semantics, the OpenMP
// kernels must agree bit for bit (tests/bench compare them).
enum class ExecPolicy {
  Serial,
  Parallel,
  Auto,  // parallel for large products, serial otherwise and inside parallel regions
};

ExecPolicy default_policy();
void set_default_policy(ExecPolicy policy);

// out = a * b (dimensions must agree).
void mat_mul_serial(const IncidenceMatrix& a, const IncidenceMatrix& b, IncidenceMatrix& out);
void mat_mul_parallel(const IncidenceMatrix& a, const IncidenceMatrix& b, IncidenceMatrix& out);
IncidenceMatrix mat_mul(const IncidenceMatrix& a, const IncidenceMatrix& b,
                        ExecPolicy policy = ExecPolicy::Auto);

std::vector<BigInt> mat_vec_serial(const IncidenceMatrix& m, const std::vector<BigInt>& v);
std::vector<BigInt> mat_vec_parallel(const IncidenceMatrix& m, const std::vector<BigInt>& v);
std::vector<BigInt> mat_vec(const IncidenceMatrix& m, const std::vector<BigInt>& v,
                            ExecPolicy policy = ExecPolicy::Auto);

WeightVector mat_vec_serial(const IncidenceMatrix& m, const WeightVector& v);
WeightVector mat_vec_parallel(const IncidenceMatrix& m, const WeightVector& v);
WeightVector mat_vec(const IncidenceMatrix& m, const WeightVector& v,
                     ExecPolicy policy = ExecPolicy::Auto);

IncidenceMatrix mat_pow(const IncidenceMatrix& m, std::size_t p,
                        ExecPolicy policy = ExecPolicy::Auto);

}  // namespace lamcert
