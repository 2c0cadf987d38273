// Kernel benchmark: serial reference vs OpenMP row-parallel kernels on the
// products that dominate certification runs (big-integer matrix squaring,
// iterated mat-vec, a full perron refinement, and a confluence corpus).
//
// Usage: lamcert_bench [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lamcert/fuzz.hpp"
#include "lamcert/kernels.hpp"
#include "lamcert/perron.hpp"
#include "lamcert/pushaway.hpp"

using namespace lamcert;

namespace {

double seconds(const std::function<void()>& body) {
  auto start = std::chrono::steady_clock::now();
  body();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

IncidenceMatrix dense_matrix(std::size_t n, int squarings) {
  fuzz::Rng rng(n * 7919);
  IncidenceMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.at(i, j) = rng.range(0, 3);
  for (std::size_t i = 0; i < n; ++i) m.at(i, (i + 1) % n) = 1;
  // Entries blow up to thousands of bits; this is the regime that pays for
  // the row parallelism.
  for (int s = 0; s < squarings; ++s) m = mat_mul(m, m, ExecPolicy::Serial);
  return m;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-34s %9.4fs %9.4fs %7.2fx\n", name, serial, parallel,
              parallel > 0 ? serial / parallel : 0.0);
}

}  // namespace

int main(int argc, char** argv) {
  int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif
  std::printf("%-34s %10s %10s %8s\n", "kernel", "serial", "parallel", "speedup");

  for (std::size_t n : {24u, 48u, 96u}) {
    IncidenceMatrix m = dense_matrix(n, 3);
    IncidenceMatrix out(n);
    double ts = 0, tp = 0;
    for (int r = 0; r < repeats; ++r) {
      ts += seconds([&] { mat_mul_serial(m, m, out); });
      tp += seconds([&] { mat_mul_parallel(m, m, out); });
    }
    std::string name = "mat_mul bigint n=" + std::to_string(n);
    row(name.c_str(), ts / repeats, tp / repeats);
  }

  {
    const std::size_t n = 96;
    IncidenceMatrix m = dense_matrix(n, 2);
    std::vector<BigInt> v(n, BigInt(1));
    double ts = 0, tp = 0;
    for (int r = 0; r < repeats; ++r) {
      ts += seconds([&] {
        std::vector<BigInt> w = v;
        for (int k = 0; k < 24; ++k) w = mat_vec_serial(m, w);
      });
      tp += seconds([&] {
        std::vector<BigInt> w = v;
        for (int k = 0; k < 24; ++k) w = mat_vec_parallel(m, w);
      });
    }
    row("mat_vec chain n=96 x24", ts / repeats, tp / repeats);
  }

  {
    fuzz::Rng rng(4242);
    IncidenceMatrix m = fuzz::random_irreducible(rng, 64, 64, 3);
    const Rational width = rational_pow(Rational(1, 10), 12);
    double ts = 0, tp = 0;
    for (int r = 0; r < repeats; ++r) {
      set_default_policy(ExecPolicy::Serial);
      ts += seconds([&] { perron_bounds(m, 200, width); });
      set_default_policy(ExecPolicy::Parallel);
      tp += seconds([&] { perron_bounds(m, 200, width); });
    }
    set_default_policy(ExecPolicy::Auto);
    row("perron_bounds n=64 width 1e-12", ts / repeats, tp / repeats);
  }

  {
    auto corpus = fuzz::exhaustive_pattern_corpus(6, 2, 3000);
    auto run_corpus = [&corpus] {
      for (const auto& pattern : corpus) (void)enumerate_all_orders(pattern, 100000);
    };
    double ts = 0, tp = 0;
    for (int r = 0; r < repeats; ++r) {
      ts += seconds(run_corpus);
      tp += seconds([&] {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (long i = 0; i < static_cast<long>(corpus.size()); ++i)
          (void)enumerate_all_orders(corpus[i], 100000);
      });
    }
    row("confluence corpus (3000 patterns)", ts / repeats, tp / repeats);
  }
  return 0;
}
