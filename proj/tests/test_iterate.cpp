#include <doctest.h>

#include <vector>

#include "cfp/iterate.hpp"

using namespace cfp;

namespace {

// Points 0, 1, 3 on the real line.
FiniteMetricSpace line3() {
  return FiniteMetricSpace({"0", "1", "3"},
                           {{0, 1, 3}, {1, 0, 2}, {3, 2, 0}});
}

// 3 -> 1, 1 -> 0, 0 -> 0.
SingleValuedMap line_map() { return SingleValuedMap({0, 0, 1}, 3); }

}  // namespace

TEST_CASE("picard orbit reaches the fixed point and keeps the duplicate") {
  const auto space = line3();
  const Gauge eta = Gauge::banach(0.5);
  const auto trace =
      picard_iterate(space, line_map(), 2, StopRule::for_certified(3), &eta);
  CHECK(trace.points == std::vector<int>{2, 1, 0, 0});
  CHECK(trace.step_dist == std::vector<double>{2.0, 1.0, 0.0});
  CHECK(trace.termination == Termination::FixedPoint);
  CHECK(trace.steps_to_fixed_point() == 2);
  // Midpoint gauge 0.75 t gives the potential 4 d at each step.
  CHECK(trace.potential == std::vector<double>{8.0, 4.0, 0.0});
}

TEST_CASE("picard orbit on the identity stops immediately") {
  const auto space = line3();
  const auto trace =
      picard_iterate(space, SingleValuedMap({0, 1, 2}, 3), 1, StopRule{});
  CHECK(trace.points == std::vector<int>{1, 1});
  CHECK(trace.termination == Termination::FixedPoint);
  CHECK(trace.steps_to_fixed_point() == 0);
  CHECK(trace.potential.empty());  // no gauge supplied
}

TEST_CASE("picard orbit on a constant map takes at most one step") {
  const auto space = line3();
  const auto trace =
      picard_iterate(space, SingleValuedMap({1, 1, 1}, 3), 2, StopRule{});
  CHECK(trace.points == std::vector<int>{2, 1, 1});
  CHECK(trace.steps_to_fixed_point() == 1);
}

TEST_CASE("picard orbit detects a two-cycle as stalled") {
  const FiniteMetricSpace two({"a", "b"}, {{0, 1}, {1, 0}});
  const auto trace =
      picard_iterate(two, SingleValuedMap({1, 0}, 2), 0, StopRule{});
  CHECK(trace.points == std::vector<int>{0, 1, 0});
  CHECK(trace.termination == Termination::Stalled);
}

TEST_CASE("picard orbit respects the step budget") {
  const auto trace = picard_iterate(line3(), line_map(), 2, StopRule{1});
  CHECK(trace.points == std::vector<int>{2, 1});
  CHECK(trace.termination == Termination::MaxIter);
}

TEST_CASE("picard orbit validates its inputs") {
  CHECK_THROWS_AS(picard_iterate(line3(), line_map(), 5, StopRule{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(picard_iterate(line3(), line_map(), 0, StopRule{-1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      picard_iterate(line3(), SingleValuedMap({0, 1}, 2), 0, StopRule{}),
      std::invalid_argument);
}

TEST_CASE("potential column is dropped when the gauge reaches the identity") {
  const Gauge near_identity = Gauge::from_function(
      GaugeKind::EtaContraction, "near-identity", [](double t) { return t; });
  // The midpoint of the identity is the identity, so every positive step has
  // no finite potential.
  const auto trace = picard_iterate(line3(), line_map(), 2,
                                    StopRule::for_certified(3), &near_identity);
  CHECK(trace.termination == Termination::FixedPoint);
  CHECK(trace.potential.empty());
}

TEST_CASE("set-valued orbit follows nearest successors to a fixed point") {
  const auto space = line3();
  const MultiValuedMap map(
      {PointSet({0}, 3), PointSet({0}, 3), PointSet({1}, 3)}, 3);
  const Gauge theta = midpoint_gauge(Gauge::banach(0.5));
  const auto trace = multivalued_orbit(space, map, 2, theta, StopRule{100});
  CHECK(trace.points == std::vector<int>{2, 1, 0});
  CHECK(trace.step_dist == std::vector<double>{2.0, 1.0});
  CHECK(trace.termination == Termination::FixedPoint);
  CHECK(trace.relaxed_steps == 0);
  CHECK(trace.potential == std::vector<double>{8.0, 4.0});
}

TEST_CASE("set-valued orbit stops before selecting when already fixed") {
  const auto space = line3();
  const MultiValuedMap map(
      {PointSet({0, 1}, 3), PointSet({0}, 3), PointSet({1}, 3)}, 3);
  const auto trace = multivalued_orbit(space, map, 0,
                                       midpoint_gauge(Gauge::banach(0.5)),
                                       StopRule{100});
  CHECK(trace.points == std::vector<int>{0});
  CHECK(trace.termination == Termination::FixedPoint);
  CHECK(trace.step_dist.empty());
}

TEST_CASE("set-valued orbit raises when a step exceeds the certified bound") {
  const auto space = line3();
  // 3 <-> 1 swap forces a second step as long as the first.
  const MultiValuedMap map(
      {PointSet({0}, 3), PointSet({2}, 3), PointSet({1}, 3)}, 3);
  try {
    multivalued_orbit(space, map, 2, Gauge::banach(0.5), StopRule{100});
    FAIL("expected SelectionBoundError");
  } catch (const SelectionBoundError& e) {
    CHECK(e.step == 1);
    CHECK(e.from == 2);
    CHECK(e.via == 1);
    CHECK(e.to == 2);
    CHECK(std::string(e.what()).find("above the certified bound") !=
          std::string::npos);
  }
}

TEST_CASE("set-valued orbit counts equality steps as relaxed") {
  const FiniteMetricSpace two({"a", "b"}, {{0, 1}, {1, 0}});
  const MultiValuedMap swap({PointSet({1}, 2), PointSet({0}, 2)}, 2);
  const Gauge identity_theta = Gauge::from_function(
      GaugeKind::EtaContraction, "identity", [](double t) { return t; });
  const auto trace =
      multivalued_orbit(two, swap, 0, identity_theta, StopRule{100});
  CHECK(trace.points == std::vector<int>{0, 1, 0});
  CHECK(trace.termination == Termination::Stalled);  // edge (0,1) repeats
  CHECK(trace.relaxed_steps == 2);
  CHECK(trace.potential.empty());  // identity gauge has no finite potential
}

TEST_CASE("set-valued orbit respects a zero step budget") {
  const auto space = line3();
  const MultiValuedMap map(
      {PointSet({0}, 3), PointSet({0}, 3), PointSet({1}, 3)}, 3);
  const auto trace = multivalued_orbit(space, map, 2,
                                       midpoint_gauge(Gauge::banach(0.5)),
                                       StopRule{0});
  CHECK(trace.points == std::vector<int>{2});
  CHECK(trace.termination == Termination::MaxIter);
}

TEST_CASE("telescoping bound dominates the distance between trace points") {
  const auto space = line3();
  const Gauge eta = Gauge::banach(0.5);
  const auto trace =
      picard_iterate(space, line_map(), 2, StopRule::for_certified(3), &eta);
  CHECK(telescoping_bound(trace, 0, 1) == 4.0);
  CHECK(telescoping_bound(trace, 0, 1) >= space.dist(2, 1));
  CHECK(telescoping_bound(trace, 0, 0) == 0.0);
  CHECK(telescoping_bound(trace, 0, 2) == 8.0);
  CHECK_THROWS_AS(telescoping_bound(trace, 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(telescoping_bound(trace, -1, 1), std::invalid_argument);
  CHECK_THROWS_AS(telescoping_bound(trace, 2, 1), std::invalid_argument);
}

TEST_CASE("telescoping bound needs a potential column") {
  const auto trace = picard_iterate(line3(), line_map(), 2, StopRule{});
  CHECK_THROWS_AS(telescoping_bound(trace, 0, 1), std::invalid_argument);
}

TEST_CASE("telescoping audit covers all pairs including the terminal point") {
  const auto space = line3();
  const Gauge eta = Gauge::banach(0.5);
  const auto trace =
      picard_iterate(space, line_map(), 2, StopRule::for_certified(3), &eta);
  const auto audit = audit_telescoping(space, trace, 1e-9);
  CHECK(audit.pass);
  CHECK(audit.pairs == 10);  // 4 covered points, n <= m
  CHECK(audit.max_excess == 0.0);
}

TEST_CASE("telescoping audit accepts a zero-step fixed-point trace") {
  const auto space = line3();
  const MultiValuedMap map(
      {PointSet({0}, 3), PointSet({1}, 3), PointSet({1}, 3)}, 3);
  const auto trace = multivalued_orbit(space, map, 1,
                                       midpoint_gauge(Gauge::banach(0.5)),
                                       StopRule{10});
  REQUIRE(trace.points == std::vector<int>{1});
  const auto audit = audit_telescoping(space, trace, 1e-9);
  CHECK(audit.pass);
  CHECK(audit.pairs == 1);
}

TEST_CASE("telescoping audit rejects multi-step traces without potentials") {
  const auto trace = picard_iterate(line3(), line_map(), 2, StopRule{});
  CHECK_THROWS_AS(audit_telescoping(line3(), trace, 1e-9),
                  std::invalid_argument);
}

TEST_CASE("telescoping audit flags an undervalued potential") {
  const auto space = line3();
  IterationTrace fake;
  fake.points = {2, 1, 0, 0};
  fake.step_dist = {2.0, 1.0, 0.0};
  fake.potential = {2.5, 2.0, 0.0};  // drop 0.5 cannot cover step of size 2
  fake.termination = Termination::FixedPoint;
  const auto audit = audit_telescoping(space, fake, 1e-9);
  CHECK(!audit.pass);
  CHECK(audit.max_excess == 1.5);  // d(2,1) - (2.5 - 2.0)
}

TEST_CASE("brute force enumerates fixed points of both map kinds") {
  const auto space = line3();
  CHECK(brute_force_fixed_points(space, line_map()) == std::vector<int>{0});
  CHECK(brute_force_fixed_points(space, SingleValuedMap({0, 1, 2}, 3)) ==
        std::vector<int>{0, 1, 2});
  const FiniteMetricSpace two({"a", "b"}, {{0, 1}, {1, 0}});
  CHECK(brute_force_fixed_points(two, SingleValuedMap({1, 0}, 2)).empty());

  const MultiValuedMap multi(
      {PointSet({0}, 3), PointSet({0}, 3), PointSet({0, 1}, 3)}, 3);
  CHECK(brute_force_fixed_points(space, multi) == std::vector<int>{0});
}
