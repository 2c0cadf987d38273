#include "lamcert/kernels.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lamcert/errors.hpp"

namespace lamcert {

namespace {

std::atomic<ExecPolicy> g_policy{ExecPolicy::Auto};

// Row-parallelism only pays off once the per-row work dwarfs the fork cost;
// small certification matrices stay serial.
constexpr std::size_t kParallelDim = 32;

bool go_parallel(std::size_t n) {
#ifdef _OPENMP
  if (omp_in_parallel()) return false;  // no nested teams
  return n >= kParallelDim;
#else
  (void)n;
  return false;
#endif
}

bool resolve(ExecPolicy policy, std::size_t n) {
  if (policy == ExecPolicy::Auto) policy = g_policy.load();
  switch (policy) {
    case ExecPolicy::Serial:
      return false;
    case ExecPolicy::Parallel:
#ifdef _OPENMP
      return !omp_in_parallel();
#else
      return false;
#endif
    default:
      return go_parallel(n);
  }
}

void require_square_match(std::size_t a, std::size_t b, const char* op) {
  if (a != b)
    throw Error("DimensionMismatch", std::string(op) + ": dimensions " + std::to_string(a) +
                                         " and " + std::to_string(b) + " differ");
}

void mul_row(const IncidenceMatrix& a, const IncidenceMatrix& b, IncidenceMatrix& out,
             std::size_t i) {
  const std::size_t n = a.dim();
  BigInt acc, term;
  for (std::size_t j = 0; j < n; ++j) {
    acc = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (a.at(i, k) == 0 || b.at(k, j) == 0) continue;
      term = a.at(i, k) * b.at(k, j);
      acc += term;
    }
    out.at(i, j) = acc;
  }
}

template <typename Scalar>
Scalar dot_row(const IncidenceMatrix& m, const std::vector<Scalar>& v, std::size_t i) {
  Scalar acc(0);
  for (std::size_t j = 0; j < m.dim(); ++j) {
    if (m.at(i, j) == 0) continue;
    acc += Scalar(m.at(i, j)) * v[j];
  }
  return acc;
}

}  // namespace

ExecPolicy default_policy() { return g_policy.load(); }
void set_default_policy(ExecPolicy policy) { g_policy.store(policy); }

void mat_mul_serial(const IncidenceMatrix& a, const IncidenceMatrix& b, IncidenceMatrix& out) {
  require_square_match(a.dim(), b.dim(), "mat_mul");
  for (std::size_t i = 0; i < a.dim(); ++i) mul_row(a, b, out, i);
}

void mat_mul_parallel(const IncidenceMatrix& a, const IncidenceMatrix& b, IncidenceMatrix& out) {
  require_square_match(a.dim(), b.dim(), "mat_mul");
  const long n = static_cast<long>(a.dim());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long i = 0; i < n; ++i) mul_row(a, b, out, static_cast<std::size_t>(i));
}

IncidenceMatrix mat_mul(const IncidenceMatrix& a, const IncidenceMatrix& b, ExecPolicy policy) {
  IncidenceMatrix out(a.dim());
  if (resolve(policy, a.dim()))
    mat_mul_parallel(a, b, out);
  else
    mat_mul_serial(a, b, out);
  return out;
}

std::vector<BigInt> mat_vec_serial(const IncidenceMatrix& m, const std::vector<BigInt>& v) {
  require_square_match(m.dim(), v.size(), "mat_vec");
  std::vector<BigInt> out(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) out[i] = dot_row(m, v, i);
  return out;
}

std::vector<BigInt> mat_vec_parallel(const IncidenceMatrix& m, const std::vector<BigInt>& v) {
  require_square_match(m.dim(), v.size(), "mat_vec");
  std::vector<BigInt> out(m.dim());
  const long n = static_cast<long>(m.dim());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = dot_row(m, v, static_cast<std::size_t>(i));
  return out;
}

std::vector<BigInt> mat_vec(const IncidenceMatrix& m, const std::vector<BigInt>& v,
                            ExecPolicy policy) {
  return resolve(policy, m.dim()) ? mat_vec_parallel(m, v) : mat_vec_serial(m, v);
}

WeightVector mat_vec_serial(const IncidenceMatrix& m, const WeightVector& v) {
  require_square_match(m.dim(), v.size(), "mat_vec");
  WeightVector out(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) out[i] = dot_row(m, v, i);
  return out;
}

WeightVector mat_vec_parallel(const IncidenceMatrix& m, const WeightVector& v) {
  require_square_match(m.dim(), v.size(), "mat_vec");
  WeightVector out(m.dim());
  const long n = static_cast<long>(m.dim());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = dot_row(m, v, static_cast<std::size_t>(i));
  return out;
}

WeightVector mat_vec(const IncidenceMatrix& m, const WeightVector& v, ExecPolicy policy) {
  return resolve(policy, m.dim()) ? mat_vec_parallel(m, v) : mat_vec_serial(m, v);
}

IncidenceMatrix mat_pow(const IncidenceMatrix& m, std::size_t p, ExecPolicy policy) {
  IncidenceMatrix result = IncidenceMatrix::identity(m.dim());
  IncidenceMatrix base = m;
  while (p > 0) {
    if (p & 1) result = mat_mul(result, base, policy);
    p >>= 1;
    if (p > 0) base = mat_mul(base, base, policy);
  }
  return result;
}

}  // namespace lamcert
