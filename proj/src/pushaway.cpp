#include "lamcert/pushaway.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>

#include "lamcert/errors.hpp"

namespace lamcert {

namespace {

std::size_t index_of(const IntersectionPattern& pattern, const CurveId& id) {
  auto it = std::find(pattern.curves.begin(), pattern.curves.end(), id);
  if (it == pattern.curves.end())
    throw Error("NotAlive", "curve " + id + " is not part of the pattern");
  return static_cast<std::size_t>(it - pattern.curves.begin());
}

template <typename ParentMap>
bool is_strict_ancestor(const ParentMap& parent, const CurveId& ancestor, const CurveId& curve) {
  auto it = parent.find(curve);
  while (it != parent.end() && it->second) {
    if (*it->second == ancestor) return true;
    it = parent.find(*it->second);
  }
  return false;
}

template <typename ParentMap>
void check_forest(const IntersectionPattern& pattern, const ParentMap& parent,
                  const char* name) {
  std::set<CurveId> curve_set(pattern.curves.begin(), pattern.curves.end());
  if (parent.size() != pattern.curves.size())
    throw Error("InvariantViolation",
                std::string(name) + " forest must assign a parent entry to every curve");
  for (const auto& [curve, par] : parent) {
    if (!curve_set.count(curve))
      throw Error("InvariantViolation", std::string(name) + " forest names unknown curve " + curve);
    if (par && !curve_set.count(*par))
      throw Error("InvariantViolation",
                  std::string(name) + " parent of " + curve + " is unknown curve " + *par);
    // Acyclicity: the chain from each curve must terminate.
    std::set<CurveId> seen{curve};
    auto it = parent.find(curve);
    while (it != parent.end() && it->second) {
      if (!seen.insert(*it->second).second)
        throw Error("InvariantViolation",
                    std::string(name) + " forest has a cycle through " + curve);
      it = parent.find(*it->second);
    }
  }
}

}  // namespace

void validate_pattern(const IntersectionPattern& pattern) {
  std::set<CurveId> curve_set;
  for (const auto& id : pattern.curves) {
    if (id.empty()) throw Error("InvariantViolation", "empty curve id");
    if (!curve_set.insert(id).second)
      throw Error("InvariantViolation", "duplicate curve id " + id);
  }
  check_forest(pattern, pattern.delta_parent, "delta");
  check_forest(pattern, pattern.s_parent, "s");

  for (const auto& id : pattern.curves) {
    if (!pattern.s_component.count(id))
      throw Error("InvariantViolation", "curve " + id + " has no component");
    if (!pattern.w_delta.count(id) || !pattern.w_s.count(id))
      throw Error("InvariantViolation", "curve " + id + " is missing subdisc weights");
  }
  for (const auto& [comp, weight] : pattern.w_component)
    if (weight < 0) throw Error("InvariantViolation", "component " + comp + " has negative weight");

  for (const auto& id : pattern.curves) {
    const ComponentId& comp = pattern.s_component.at(id);
    if (!pattern.w_component.count(comp))
      throw Error("UnknownComponent", "curve " + id + " lives in unlisted component " + comp);
    if (pattern.w_delta.at(id) < 0 || pattern.w_s.at(id) < 0)
      throw Error("InvariantViolation", "curve " + id + " has a negative weight");
    if (pattern.w_s.at(id) > pattern.w_component.at(comp))
      throw Error("InvariantViolation",
                  "curve " + id + " bounds more weight than its whole component");

    const auto& spar = pattern.s_parent.at(id);
    if (spar) {
      if (pattern.s_component.at(*spar) != comp)
        throw Error("InvariantViolation",
                    "curve " + id + " and its s-parent lie in different components");
      if (pattern.w_s.at(id) > pattern.w_s.at(*spar))
        throw Error("InvariantViolation",
                    "s-subdisc of " + id + " outweighs the parent subdisc of " + *spar);
    }
    const auto& dpar = pattern.delta_parent.at(id);
    if (dpar && pattern.w_delta.at(id) > pattern.w_delta.at(*dpar))
      throw Error("InvariantViolation",
                  "delta-subdisc of " + id + " outweighs the parent subdisc of " + *dpar);
  }
}

RewriteState::RewriteState(IntersectionPattern pattern) : pattern_(std::move(pattern)) {
  validate_pattern(pattern_);
  status_.assign(pattern_.curves.size(), CurveStatus::Alive);
  current_subdisc_.reserve(pattern_.curves.size());
  for (const auto& id : pattern_.curves) current_subdisc_.push_back(pattern_.w_s.at(id));
  component_weight_ = pattern_.w_component;
}

CurveStatus RewriteState::status(const CurveId& curve) const {
  return status_[index_of(pattern_, curve)];
}

std::vector<CurveId> RewriteState::alive_curves() const {
  std::vector<CurveId> out;
  for (std::size_t i = 0; i < status_.size(); ++i)
    if (status_[i] == CurveStatus::Alive) out.push_back(pattern_.curves[i]);
  return out;
}

std::vector<CurveId> RewriteState::delta_leaves() const {
  std::vector<CurveId> alive = alive_curves();
  std::vector<CurveId> leaves;
  for (const auto& candidate : alive) {
    bool innermost = true;
    for (const auto& other : alive) {
      if (other != candidate && is_strict_ancestor(pattern_.delta_parent, candidate, other)) {
        innermost = false;
        break;
      }
    }
    if (innermost) leaves.push_back(candidate);
  }
  std::sort(leaves.begin(), leaves.end());
  return leaves;
}

bool RewriteState::done() const {
  return std::none_of(status_.begin(), status_.end(),
                      [](CurveStatus s) { return s == CurveStatus::Alive; });
}

std::map<ComponentId, Rational> RewriteState::current_weights() const {
  return component_weight_;
}

RewriteState surger(const RewriteState& state, const CurveId& gamma) {
  const IntersectionPattern& pattern = state.pattern_;
  std::size_t g = index_of(pattern, gamma);
  if (state.status_[g] != CurveStatus::Alive)
    throw Error("NotAlive", "curve " + gamma + " is not alive");
  for (std::size_t i = 0; i < pattern.curves.size(); ++i) {
    if (state.status_[i] != CurveStatus::Alive) continue;
    if (is_strict_ancestor(pattern.delta_parent, gamma, pattern.curves[i]))
      throw Error("NotInnermost", "curve " + gamma + " has the alive delta-descendant " +
                                      pattern.curves[i]);
  }

  RewriteState next = state;
  SurgeryEvent event;
  event.curve = gamma;
  event.replaced_weight = next.current_subdisc_[g];

  // The S-subdisc currently bounded by gamma is swapped for a pushed-off
  // copy of gamma's Delta-subdisc.
  Rational change = pattern.w_delta.at(gamma) - next.current_subdisc_[g];
  next.component_weight_[pattern.s_component.at(gamma)] += change;
  for (std::size_t i = 0; i < pattern.curves.size(); ++i) {
    if (is_strict_ancestor(pattern.s_parent, pattern.curves[i], gamma)) {
      assert(next.status_[i] == CurveStatus::Alive);
      next.current_subdisc_[i] += change;
    }
  }

  next.status_[g] = CurveStatus::Glued;
  next.current_subdisc_[g] = pattern.w_delta.at(gamma);
  for (std::size_t i = 0; i < pattern.curves.size(); ++i) {
    if (!is_strict_ancestor(pattern.s_parent, gamma, pattern.curves[i])) continue;
    if (next.status_[i] == CurveStatus::Alive) {
      next.status_[i] = CurveStatus::Removed;
      event.removed.push_back(pattern.curves[i]);
    } else if (next.status_[i] == CurveStatus::Glued) {
      next.status_[i] = CurveStatus::DiscardedGlued;
      event.discarded.push_back(pattern.curves[i]);
    }
  }
  std::sort(event.removed.begin(), event.removed.end());
  std::sort(event.discarded.begin(), event.discarded.end());
  next.events_.push_back(std::move(event));
  return next;
}

std::string PushAwayResult::normalized() const {
  std::ostringstream out;
  out << "glued=[";
  for (const auto& id : glued) out << id << ",";
  out << "];gone=[";
  std::set<CurveId> gone = removed;
  gone.insert(discarded.begin(), discarded.end());
  for (const auto& id : gone) out << id << ",";
  out << "];weights={";
  for (const auto& [comp, weight] : final_weights)
    out << comp << ":" << rational_to_string(weight) << ",";
  out << "}";
  return out.str();
}

PushAwayResult result_of(const RewriteState& state) {
  PushAwayResult result;
  const IntersectionPattern& pattern = state.pattern();
  for (const auto& id : pattern.curves) {
    switch (state.status(id)) {
      case CurveStatus::Glued:
        result.glued.insert(id);
        break;
      case CurveStatus::Removed:
        result.removed.insert(id);
        break;
      case CurveStatus::DiscardedGlued:
        result.discarded.insert(id);
        break;
      case CurveStatus::Alive:
        throw Error("PreconditionFailed", "result requested before curve " + id + " was resolved");
    }
  }
  result.final_weights = state.current_weights();
  return result;
}

void verify_result(const IntersectionPattern& pattern, const PushAwayResult& result) {
  std::size_t covered = result.glued.size() + result.removed.size() + result.discarded.size();
  if (covered != pattern.curves.size())
    throw Error("LemmaViolation", "statuses do not partition the curve set");
  for (const auto& a : result.glued)
    for (const auto& b : result.glued)
      if (a != b && is_strict_ancestor(pattern.s_parent, a, b))
        throw Error("LemmaViolation", "glued set is not an antichain: " + a + " encloses " + b);

  for (const auto& [comp, initial] : pattern.w_component) {
    Rational expected = initial;
    for (const auto& id : result.glued) {
      if (pattern.s_component.at(id) != comp) continue;
      expected += pattern.w_delta.at(id) - pattern.w_s.at(id);
    }
    auto it = result.final_weights.find(comp);
    if (it == result.final_weights.end() || it->second != expected)
      throw Error("LemmaViolation", "final weight of component " + comp +
                                        " does not match the closed form " +
                                        rational_to_string(expected));
  }
}

PushAwayResult push_away(const IntersectionPattern& pattern,
                         const std::vector<CurveId>* order) {
  RewriteState state(pattern);
  if (order != nullptr) {
    for (const auto& id : *order) {
      if (state.status(id) != CurveStatus::Alive) continue;  // resolved by an earlier surgery
      state = surger(state, id);
    }
    if (!state.done())
      throw Error("PreconditionFailed", "supplied order leaves alive curves behind");
  } else {
    while (!state.done()) {
      auto leaves = state.delta_leaves();
      // A finite forest always has a leaf, so progress is guaranteed.
      state = surger(state, leaves.front());
    }
  }
  PushAwayResult result = result_of(state);
  verify_result(pattern, result);
  return result;
}

EnumerationOutcome enumerate_all_orders(const IntersectionPattern& pattern, std::size_t cap) {
  EnumerationOutcome outcome;
  std::map<std::string, PushAwayResult> distinct;

  std::function<void(const RewriteState&)> walk = [&](const RewriteState& state) {
    if (state.done()) {
      if (++outcome.sequence_count > cap)
        throw Error("EnumerationCapExceeded",
                    "more than " + std::to_string(cap) + " maximal surgery sequences");
      PushAwayResult result = result_of(state);
      verify_result(pattern, result);
      distinct.emplace(result.normalized(), std::move(result));
      return;
    }
    for (const auto& leaf : state.delta_leaves()) walk(surger(state, leaf));
  };

  walk(RewriteState(pattern));
  for (auto& [key, result] : distinct) outcome.distinct.push_back(std::move(result));
  return outcome;
}

IntersectionPattern component_restrict(const IntersectionPattern& pattern,
                                       const ComponentId& component) {
  validate_pattern(pattern);
  if (!pattern.w_component.count(component))
    throw Error("UnknownComponent", "no component named " + component);

  IntersectionPattern out;
  out.w_component.emplace(component, pattern.w_component.at(component));
  std::set<CurveId> kept;
  for (const auto& id : pattern.curves) {
    if (pattern.s_component.at(id) != component) continue;
    kept.insert(id);
    out.curves.push_back(id);
    out.s_component.emplace(id, component);
    out.s_parent.emplace(id, pattern.s_parent.at(id));  // stays inside the component
    out.w_delta.emplace(id, pattern.w_delta.at(id));
    out.w_s.emplace(id, pattern.w_s.at(id));
  }
  // Delta-forest induced on the kept curves: nearest kept ancestor.
  for (const auto& id : out.curves) {
    std::optional<CurveId> parent = pattern.delta_parent.at(id);
    while (parent && !kept.count(*parent)) parent = pattern.delta_parent.at(*parent);
    out.delta_parent.emplace(id, parent);
  }
  return out;
}

std::map<ComponentId, Rational> weight_delta(const IntersectionPattern& pattern,
                                             const PushAwayResult& result) {
  std::map<ComponentId, Rational> delta;
  for (const auto& [comp, initial] : pattern.w_component) {
    auto it = result.final_weights.find(comp);
    if (it == result.final_weights.end())
      throw Error("PreconditionFailed", "result does not cover component " + comp);
    delta.emplace(comp, it->second - initial);
  }
  return delta;
}

}  // namespace lamcert
