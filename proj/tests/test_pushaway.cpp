#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lamcert/errors.hpp"
#include "lamcert/fuzz.hpp"
#include "lamcert/pushaway.hpp"

using namespace lamcert;

namespace {

Rational rat(const char* text) { return rational_from_string(text); }

// One curve, trivial forests.
IntersectionPattern single_curve() {
  IntersectionPattern p;
  p.curves = {"g"};
  p.delta_parent = {{"g", std::nullopt}};
  p.s_parent = {{"g", std::nullopt}};
  p.s_component = {{"g", "C0"}};
  p.w_delta = {{"g", rat("1/4")}};
  p.w_s = {{"g", rat("1/2")}};
  p.w_component = {{"C0", Rational(2)}};
  return p;
}

// g1 nested inside g0 on the S side; siblings inside Delta.
IntersectionPattern concentric_pair() {
  IntersectionPattern p;
  p.curves = {"g0", "g1"};
  p.delta_parent = {{"g0", std::nullopt}, {"g1", std::nullopt}};
  p.s_parent = {{"g0", std::nullopt}, {"g1", CurveId("g0")}};
  p.s_component = {{"g0", "C0"}, {"g1", "C0"}};
  p.w_delta = {{"g0", rat("1/3")}, {"g1", rat("1/5")}};
  p.w_s = {{"g0", rat("1")}, {"g1", rat("1/2")}};
  p.w_component = {{"C0", Rational(2)}};
  return p;
}

// Disjoint on the S side, siblings in Delta.
IntersectionPattern disjoint_pair() {
  IntersectionPattern p = concentric_pair();
  p.s_parent["g1"] = std::nullopt;
  return p;
}

}  // namespace

TEST_CASE("pattern validation") {
  CHECK_NOTHROW(validate_pattern(single_curve()));

  IntersectionPattern cyc = concentric_pair();
  cyc.s_parent["g0"] = CurveId("g1");
  CHECK_THROWS_AS(validate_pattern(cyc), Error);

  IntersectionPattern heavy_child = concentric_pair();
  heavy_child.w_s["g1"] = Rational(3);  // outweighs the parent subdisc
  CHECK_THROWS_AS(validate_pattern(heavy_child), Error);

  IntersectionPattern cross = concentric_pair();
  cross.s_component["g1"] = "C1";
  cross.w_component["C1"] = Rational(2);
  CHECK_THROWS_AS(validate_pattern(cross), Error);  // s-parent in another component

  IntersectionPattern unlisted = single_curve();
  unlisted.w_component.clear();
  CHECK_THROWS_AS(validate_pattern(unlisted), Error);
}

TEST_CASE("surgery on a single curve") {
  RewriteState state{single_curve()};
  RewriteState after = surger(state, "g");
  CHECK(after.status("g") == CurveStatus::Glued);
  CHECK(after.done());
  PushAwayResult result = result_of(after);
  CHECK(result.glued == std::set<CurveId>{"g"});
  CHECK(result.final_weights.at("C0") == rat("7/4"));  // 2 - 1/2 + 1/4
}

TEST_CASE("surgery removes nested alive curves") {
  RewriteState state{concentric_pair()};
  RewriteState after = surger(state, "g0");
  CHECK(after.status("g0") == CurveStatus::Glued);
  CHECK(after.status("g1") == CurveStatus::Removed);
  CHECK(after.done());
}

TEST_CASE("a patch swallowed by a later surgery is discarded") {
  RewriteState state{concentric_pair()};
  RewriteState mid = surger(state, "g1");
  CHECK(mid.status("g1") == CurveStatus::Glued);
  RewriteState after = surger(mid, "g0");
  CHECK(after.status("g1") == CurveStatus::DiscardedGlued);
  CHECK(after.status("g0") == CurveStatus::Glued);
  // The replaced weight of g0 reflects the already-glued patch of g1.
  CHECK(after.events().back().replaced_weight == rat("1") - rat("1/2") + rat("1/5"));
}

TEST_CASE("surgery preconditions") {
  IntersectionPattern nested = concentric_pair();
  nested.delta_parent["g1"] = CurveId("g0");  // g1 now inside g0 in Delta too
  RewriteState state{nested};
  try {
    surger(state, "g0");
    FAIL("expected NotInnermost");
  } catch (const Error& e) {
    CHECK(e.code() == "NotInnermost");
    CHECK(std::string(e.what()).find("g1") != std::string::npos);
  }

  RewriteState done = surger(RewriteState{single_curve()}, "g");
  CHECK_THROWS_AS(surger(done, "g"), Error);
  CHECK_THROWS_AS(surger(done, "nope"), Error);
}

TEST_CASE("push away of the empty pattern") {
  IntersectionPattern empty;
  empty.w_component = {{"C0", Rational(3)}};
  PushAwayResult result = push_away(empty);
  CHECK(result.glued.empty());
  CHECK(result.final_weights.at("C0") == Rational(3));
}

TEST_CASE("both orders of the concentric pair agree") {
  IntersectionPattern p = concentric_pair();
  std::vector<CurveId> first_outer{"g0", "g1"};
  std::vector<CurveId> first_inner{"g1", "g0"};
  PushAwayResult a = push_away(p, &first_outer);
  PushAwayResult b = push_away(p, &first_inner);
  CHECK(a.glued == std::set<CurveId>{"g0"});
  CHECK(b.glued == std::set<CurveId>{"g0"});
  CHECK(a.normalized() == b.normalized());
  // Statuses differ (removed vs discarded) but the surviving material agrees.
  CHECK(a.removed == std::set<CurveId>{"g1"});
  CHECK(b.discarded == std::set<CurveId>{"g1"});
  CHECK(a.final_weights.at("C0") == Rational(2) - Rational(1) + rat("1/3"));
}

TEST_CASE("disjoint curves both survive") {
  IntersectionPattern p = disjoint_pair();
  std::vector<CurveId> ab{"g0", "g1"};
  std::vector<CurveId> ba{"g1", "g0"};
  CHECK(push_away(p, &ab).glued == std::set<CurveId>{"g0", "g1"});
  CHECK(push_away(p, &ba).glued == std::set<CurveId>{"g0", "g1"});
  CHECK(push_away(p, &ab).normalized() == push_away(p, &ba).normalized());
}

TEST_CASE("enumeration outcomes") {
  EnumerationOutcome one = enumerate_all_orders(single_curve(), 100);
  CHECK(one.sequence_count == 1);
  CHECK(one.confluent());

  EnumerationOutcome pair = enumerate_all_orders(concentric_pair(), 100);
  CHECK(pair.sequence_count == 2);
  REQUIRE(pair.confluent());
  CHECK(pair.distinct.front().glued == std::set<CurveId>{"g0"});

  CHECK_THROWS_AS(enumerate_all_orders(concentric_pair(), 1), Error);
}

TEST_CASE("component restriction commutes with pushing away") {
  IntersectionPattern p;
  p.curves = {"a0", "a1", "b0"};
  p.delta_parent = {{"a0", std::nullopt}, {"a1", CurveId("b0")}, {"b0", CurveId("a0")}};
  p.s_parent = {{"a0", std::nullopt}, {"a1", CurveId("a0")}, {"b0", std::nullopt}};
  p.s_component = {{"a0", "C0"}, {"a1", "C0"}, {"b0", "C1"}};
  p.w_delta = {{"a0", rat("1")}, {"a1", rat("1/8")}, {"b0", rat("1/2")}};
  p.w_s = {{"a0", rat("2")}, {"a1", rat("1/2")}, {"b0", rat("1")}};
  p.w_component = {{"C0", Rational(3)}, {"C1", Rational(2)}};

  IntersectionPattern c0 = component_restrict(p, "C0");
  CHECK(c0.curves == std::vector<CurveId>{"a0", "a1"});
  // The delta forest is induced: b0 drops out, so a1 hangs under a0.
  CHECK(c0.delta_parent.at("a1") == CurveId("a0"));

  PushAwayResult full = push_away(p);
  PushAwayResult local = push_away(c0);
  for (const auto& id : local.glued) CHECK(full.glued.count(id) == 1);
  CHECK(local.final_weights.at("C0") == full.final_weights.at("C0"));

  IntersectionPattern c1 = component_restrict(p, "C1");
  CHECK(push_away(c1).final_weights.at("C1") == full.final_weights.at("C1"));

  // Restriction of the full pattern to one component is the identity there.
  IntersectionPattern only = component_restrict(c0, "C0");
  CHECK(only.curves == c0.curves);
  CHECK(only.delta_parent == c0.delta_parent);

  IntersectionPattern spare = single_curve();
  spare.w_component.emplace("C9", Rational(5));
  IntersectionPattern none = component_restrict(spare, "C9");
  CHECK(none.curves.empty());
  CHECK(push_away(none).final_weights.at("C9") == Rational(5));

  CHECK_THROWS_AS(component_restrict(p, "C7"), Error);
}

TEST_CASE("weight deltas are diagnostics with either sign") {
  IntersectionPattern empty;
  empty.w_component = {{"C0", Rational(1)}};
  auto zero = weight_delta(empty, push_away(empty));
  CHECK(zero.at("C0") == Rational(0));

  IntersectionPattern lighter = single_curve();  // w_delta 1/4 < w_s 1/2
  auto down = weight_delta(lighter, push_away(lighter));
  CHECK(down.at("C0") == rat("-1/4"));

  IntersectionPattern heavier = single_curve();
  heavier.w_delta["g"] = rat("3/4");
  auto up = weight_delta(heavier, push_away(heavier));
  CHECK(up.at("C0") == rat("1/4"));
}

TEST_CASE("final glued sets are s-antichains and statuses partition") {
  fuzz::Rng rng(123);
  for (int trial = 0; trial < 150; ++trial) {
    IntersectionPattern p = fuzz::random_pattern(rng, 7, 2);
    PushAwayResult result = push_away(p);  // push_away verifies internally
    CHECK(result.glued.size() + result.removed.size() + result.discarded.size() ==
          p.curves.size());
    // Weight recomputation from the event log must agree with the result.
    RewriteState state{p};
    while (!state.done()) state = surger(state, state.delta_leaves().front());
    std::map<ComponentId, Rational> replay = p.w_component;
    for (const auto& event : state.events())
      replay.at(p.s_component.at(event.curve)) +=
          p.w_delta.at(event.curve) - event.replaced_weight;
    CHECK(replay == result.final_weights);
    CHECK(state.events().size() == result.glued.size() + result.discarded.size());
  }
}

TEST_CASE("supplied orders must finish the job") {
  IntersectionPattern p = concentric_pair();
  std::vector<CurveId> incomplete{"g1"};
  CHECK_THROWS_AS(push_away(p, &incomplete), Error);
  // Orders listing curves that an earlier surgery resolved simply skip them.
  std::vector<CurveId> redundant{"g0", "g1"};
  CHECK(push_away(p, &redundant).glued == std::set<CurveId>{"g0"});
}
