#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lamcert/rational.hpp"

namespace lamcert {

using CurveId = std::string;
using ComponentId = std::string;

// Combinatorial record of the intersection of a fixed disc Delta with a
// union of discs S: the intersection curves with their nesting forest
// inside Delta, their nesting forest inside each component of S, and the
// weights of the subdiscs they bound. Boundary curves are excluded by
// construction (the boundaries are disjoint).
struct IntersectionPattern {
  std::vector<CurveId> curves;
  std::map<CurveId, std::optional<CurveId>> delta_parent;
  std::map<CurveId, ComponentId> s_component;
  std::map<CurveId, std::optional<CurveId>> s_parent;
  std::map<CurveId, Rational> w_delta;       // weight of the Delta-subdisc bounded by the curve
  std::map<CurveId, Rational> w_s;           // weight of the S-subdisc bounded by the curve
  std::map<ComponentId, Rational> w_component;
};

// Forest shape, component compatibility, and weight monotonicity.
void validate_pattern(const IntersectionPattern& pattern);

enum class CurveStatus { Alive, Glued, Removed, DiscardedGlued };

struct SurgeryEvent {
  CurveId curve;
  Rational replaced_weight;  // current weight of the S-subdisc at the event
  std::vector<CurveId> removed;
  std::vector<CurveId> discarded;
};

// Rewriting state: statuses per curve plus the ordered surgery log. States
// are values (they own their pattern); surger returns a new one.
class RewriteState {
 public:
  explicit RewriteState(IntersectionPattern pattern);

  const IntersectionPattern& pattern() const { return pattern_; }
  CurveStatus status(const CurveId& curve) const;
  const std::vector<SurgeryEvent>& events() const { return events_; }

  std::vector<CurveId> alive_curves() const;
  // Alive curves with no alive strict descendant inside Delta, sorted by id.
  std::vector<CurveId> delta_leaves() const;
  bool done() const;

  std::map<ComponentId, Rational> current_weights() const;

  friend RewriteState surger(const RewriteState& state, const CurveId& gamma);

 private:
  IntersectionPattern pattern_;
  std::vector<CurveStatus> status_;
  std::vector<Rational> current_subdisc_;  // live bookkeeping per curve
  std::map<ComponentId, Rational> component_weight_;
  std::vector<SurgeryEvent> events_;
};

// Surgery along Delta on gamma: gamma's current S-subdisc is replaced by a
// pushed-off copy of its Delta-subdisc. gamma must be alive and innermost
// in Delta among alive curves (Error("NotAlive") / Error("NotInnermost")).
// Alive strict S-descendants of gamma are removed; glued ones are
// discarded together with their patches.
RewriteState surger(const RewriteState& state, const CurveId& gamma);

struct PushAwayResult {
  std::set<CurveId> glued;      // patches present in the final surface
  std::set<CurveId> removed;    // removed while still alive
  std::set<CurveId> discarded;  // glued earlier, then swallowed by a later surgery
  std::map<ComponentId, Rational> final_weights;

  // Canonical form quotienting by patch identity: removed and discarded
  // patches both leave no material behind, so confluence compares the
  // surviving glued set and the final weights only.
  std::string normalized() const;
};

// Result invariants, checked after every run: statuses partition the curve
// set, the glued set is an antichain in the original S-forest, and the
// final weights match the closed form over surviving glued curves.
void verify_result(const IntersectionPattern& pattern, const PushAwayResult& result);

// Runs surgeries until no curve is alive. With no supplied order the
// lowest-id alive Delta-leaf is chosen each step; a supplied order must
// list each alive curve it surgers at a legal moment (entries that are no
// longer alive are skipped).
PushAwayResult push_away(const IntersectionPattern& pattern,
                         const std::vector<CurveId>* order = nullptr);

PushAwayResult result_of(const RewriteState& state);

struct EnumerationOutcome {
  std::size_t sequence_count = 0;
  std::vector<PushAwayResult> distinct;  // one representative per normalized form
  bool confluent() const { return distinct.size() <= 1; }
};

// Executes every maximal surgery sequence (Error("EnumerationCapExceeded")
// if there are more than cap) and collects the distinct normalized results.
EnumerationOutcome enumerate_all_orders(const IntersectionPattern& pattern, std::size_t cap);

// Restriction to one component; the Delta-forest is induced by taking
// nearest ancestors within the component. Error("UnknownComponent") if the
// component does not exist.
IntersectionPattern component_restrict(const IntersectionPattern& pattern,
                                       const ComponentId& component);

// Per-component final minus initial weight. Diagnostic only: the sign is
// meaningful only under the minimality hypothesis on Delta, which is the
// caller's burden.
std::map<ComponentId, Rational> weight_delta(const IntersectionPattern& pattern,
                                             const PushAwayResult& result);

}  // namespace lamcert
