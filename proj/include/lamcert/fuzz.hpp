#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lamcert/disc_model.hpp"
#include "lamcert/io.hpp"
#include "lamcert/matrix.hpp"
#include "lamcert/pushaway.hpp"

namespace lamcert::fuzz {

// Deterministic generator; trials derive their own engines from
// trial_seed so runs parallelize without changing results.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  std::size_t below(std::size_t n) { return n == 0 ? 0 : next() % n; }
  long range(long lo, long hi) {  // inclusive
    return lo + static_cast<long>(below(static_cast<std::size_t>(hi - lo + 1)));
  }
  bool one_in(std::size_t n) { return below(n) == 0; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index);

// --- generators -----------------------------------------------------------

// Random irreducible matrix, dimension in [n_min, n_max], entries <= entry_max.
IncidenceMatrix random_irreducible(Rng& rng, std::size_t n_min, std::size_t n_max,
                                   long entry_max);

// Irreducible M with an exact rational eigenpair Mv = lambda v, v > 0,
// v[0] = 1, lambda a positive integer. The workhorse for instances whose
// growth rate is known exactly.
struct EigenInstance {
  IncidenceMatrix matrix;
  WeightVector v;
  Rational lambda;
};
EigenInstance random_eigen_instance(Rng& rng, std::size_t n_min, std::size_t n_max);

// Entrywise-reduced copy of m that stays irreducible (keeps a positive
// backbone); strictly smaller in at least one entry when reducible_entries
// allows it.
IncidenceMatrix reduce_entries(Rng& rng, const IncidenceMatrix& m);

// Synthetic stabilized enlargement over an exact eigen base: new weights
// below the tightening target, new rows within budget and reaching the
// base, so the full tightening certificate is expected to verify.
Enlargement random_enlargement(Rng& rng);

// Layered family of height in [1, h_max] with exact surrogate data and a
// within-budget bottom-row update; pipeline is expected to verify.
io::LayeredCase random_layered_case(Rng& rng, std::size_t h_max);

// Random intersection pattern with at most max_curves curves over at most
// max_components components; weights strictly monotone along both forests.
IntersectionPattern random_pattern(Rng& rng, std::size_t max_curves,
                                   std::size_t max_components);

// Systematic corpus: all (s-forest, component assignment, delta-forest)
// shapes by increasing curve count, deterministic weights, truncated at
// cap patterns.
std::vector<IntersectionPattern> exhaustive_pattern_corpus(std::size_t max_curves,
                                                           std::size_t max_components,
                                                           std::size_t cap);

// --- shrinking --------------------------------------------------------------

// Greedy minimizers used for failing trials: keep shrinking while the
// predicate still reports failure. Matrices lose indices and entries,
// patterns lose curves (children re-attach to the grandparent).
IncidenceMatrix shrink_matrix(const IncidenceMatrix& start,
                              const std::function<bool(const IncidenceMatrix&)>& fails);
IntersectionPattern shrink_pattern(const IntersectionPattern& start,
                                   const std::function<bool(const IntersectionPattern&)>& fails);

// --- suites ----------------------------------------------------------------

// Suites: pf | propagation | pipeline | confluence. Deterministic given
// (name, trials, seed); zero tolerated failures. On failure the report
// carries a greedily minimized counterexample document.
//
// Size envelopes: pf draws matrices with n <= 6, entries <= 3; propagation
// n <= 8, entries <= 3; pipeline alternates enlargements (bases up to 4
// discs, up to 3 new) with layered families up to height 3; confluence
// draws patterns with up to 7 curves over up to 2 components.
io::Report fuzz_suite(const std::string& name, std::size_t trials, std::uint64_t seed);

}  // namespace lamcert::fuzz
