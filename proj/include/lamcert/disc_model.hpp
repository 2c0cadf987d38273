#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lamcert/matrix.hpp"
#include "lamcert/perron.hpp"
#include "lamcert/rational.hpp"

namespace lamcert {

// Multisets of disc/surface labels with multiplicities; the canonical key
// order doubles as the serialization order.
using LabelMultiset = std::map<std::string, long>;

// A disc system together with the combinatorial image data of each disc:
// for disc E_i, images[i][E_j] counts the components of the image of E_i
// carried by E_j. weights and lambda form the rational surrogate of the
// Perron pair.
struct DiscSystem {
  std::vector<std::string> labels;
  std::vector<LabelMultiset> images;
  WeightVector weights;
  Rational lambda;
};

// Throws on violation: unknown labels, duplicate labels, empty image rows,
// reducible incidence matrix, or failing subinvariance of (weights, lambda).
void validate_disc_system(const DiscSystem& system);

IncidenceMatrix incidence_matrix(const DiscSystem& system);

// Sum over the multiset of lambda^level * weight(label) * multiplicity.
Rational weighted_intersection(const LabelMultiset& counts,
                               const std::vector<std::string>& labels,
                               const WeightVector& weights, const Rational& lambda, long level);
Rational weighted_intersection(const std::vector<long>& counts, const WeightVector& weights,
                               const Rational& lambda, long level);

// A system enlarged by new discs whose images are carried by the union of
// old and new discs. The tightening pair singles out the new disc parallel
// to a strictly heavier base disc.
struct Enlargement {
  DiscSystem base;
  std::vector<std::string> new_labels;
  WeightVector new_weights;
  std::vector<LabelMultiset> new_images;  // over base + new labels
  std::size_t delta_index = 0;            // 0-based into the full label list; default k+l-1
  std::size_t parallel_to = 0;            // 0-based; default 0

  std::vector<std::string> full_labels() const;
  WeightVector full_weights() const;
};

void validate_enlargement(const Enlargement& e);

// Assembles the enlarged incidence matrix: base block upper left, zero
// block upper right, new-disc rows below. Validates the subinvariance of
// the concatenated weights and the tightening inequality; throws
// Error("InvariantViolation") naming the offending row.
IncidenceMatrix build_bar_matrix(const Enlargement& e);

// row_copy(mbar, delta, target); delta defaults to the last row and target
// to the first, matching the tightening move.
IncidenceMatrix apply_tightening(const IncidenceMatrix& mbar, std::size_t delta,
                                 std::size_t target);

// Layered surface family: the top layer is identified with the base discs;
// each lower-layer surface's image is carried by base discs or by surfaces
// one layer up. The last surface of the bottom layer is the tightening
// surface.
struct LayeredFamily {
  DiscSystem base;
  std::vector<std::vector<std::string>> lower_layers;    // top-down, ending at the bottom layer
  std::map<std::string, LabelMultiset> carried;          // one row per lower-layer surface
  std::map<std::string, Rational> surface_weights;       // one weight per lower-layer surface

  std::size_t height() const { return lower_layers.size(); }
  std::vector<std::string> full_labels() const;
  WeightVector full_weights() const;
};

void validate_layered_family(const LayeredFamily& family);

// Block matrix of the family in lexicographic order (top layer first).
// Throws Error("LayerRuleViolation") naming the surface and illegal target.
IncidenceMatrix build_layer_matrix(const LayeredFamily& family);

// True iff w matches the family's zero pattern: base rows are the base
// incidence matrix followed by zeros, lower rows hit only base columns and
// next-layer-up columns.
bool check_layer_zero_pattern(const LayeredFamily& family, const IncidenceMatrix& w);

// Certifies that a tightening step strictly decreased the growth rate:
// a per-index schedule of strict powers plus a certified interval
// separation between the spectral radius of the chosen irreducible
// submatrix and that of the original system.
struct TighteningCertificate {
  std::map<std::size_t, std::size_t> strict_schedule;  // index -> smallest strict power
  std::optional<IndexSubset> scc_used;
  PerronCertificate before;
  PerronCertificate after;
  bool verdict = false;     // true only with certified separation (and, in the
                            // pipeline, a complete schedule)
  bool conclusive = false;  // false when the intervals failed to separate at the cap
};

struct SccCertificate {
  IndexSubset subset;
  PerronCertificate cert;
};

struct PipelineResult {
  IncidenceMatrix w;
  IncidenceMatrix t0;
  IncidenceMatrix t1;
  IncidenceMatrix t2;
  IncidenceMatrix t3;
  IndexSubset kept;  // indices of base + bottom-layer surfaces inside t2
  std::vector<SccCertificate> scc_certificates;
  TighteningCertificate cert;
};

// Runs the tightening pipeline: T0 copies the bottom row of W over the
// first, T1 rewrites the bottom-layer rows with the supplied updated
// incidence (verified not to increase weighted images), T2 copies the
// bottom row again, T3 keeps only base and bottom-layer indices. The
// certificate records, for every index of T2, the least power p <= p_max
// with (T2^p u)_j < lambda^p u_j, and certifies the spectral drop of the
// best irreducible component of T3 against the base system.
//
// p_max == 0 selects the default m*(m+1) where m = dim(T2).
PipelineResult pipeline(const LayeredFamily& family,
                        const std::map<std::string, LabelMultiset>& d_update,
                        const WeightVector& u, const Rational& lambda, std::size_t p_max = 0);

// Interval separation between the spectral radius of submatrix(after, scc)
// and that of the base system's matrix, refining both certificates until
// they separate or an iteration cap is hit (then conclusive == false and
// the caller reports NotSeparable).
TighteningCertificate certify_improvement(const DiscSystem& before,
                                          const IncidenceMatrix& after_matrix,
                                          const IndexSubset& scc);

struct TightenOutcome {
  IncidenceMatrix mbar;
  IncidenceMatrix mhat;
  std::vector<SccCertificate> scc_certificates;
  TighteningCertificate cert;
};

// The two-block route: builds the enlarged matrix, performs the row copy,
// computes the strict schedule on powers of the tightened matrix against
// the concatenated weights, and certifies the spectral drop of the best
// component. Coincides with the pipeline on height-1 families.
TightenOutcome run_tightening(const Enlargement& e, std::size_t p_max = 0);

struct TraceDisc {
  std::string label;
  std::string parallel_class;
  Rational weight;
};

// Nested enlargement sequence with a claimed stabilization index.
struct StabilizationTrace {
  std::vector<std::vector<TraceDisc>> systems;
  std::size_t stabilization_index = 0;  // J
};

struct StabilizationVerdict {
  bool ok = false;
  std::string detail;                    // first failure, empty when ok
  std::optional<std::size_t> minimal_j;  // smallest index that stabilizes, if any
};

// True iff the systems nest and, at index J, every disc of system J+1 has a
// parallel predecessor in system J of no greater weight.
StabilizationVerdict validate_stabilization(const StabilizationTrace& trace);

}  // namespace lamcert
