#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cfp/generate.hpp"
#include "cfp/metric.hpp"
#include "cfp/rng.hpp"

using namespace cfp;

namespace {

// Points 0, 1, 3 on the real line.
FiniteMetricSpace line3() {
  return FiniteMetricSpace({"0", "1", "3"},
                           {{0, 1, 3}, {1, 0, 2}, {3, 2, 0}});
}

// Points 0, 1, 2, 3 on the real line.
FiniteMetricSpace line4() {
  return FiniteMetricSpace(
      {"0", "1", "2", "3"},
      {{0, 1, 2, 3}, {1, 0, 1, 2}, {2, 1, 0, 1}, {3, 2, 1, 0}});
}

}  // namespace

TEST_CASE("axiom check accepts a two-point metric") {
  const auto violations = check_metric_axioms({{0, 1}, {1, 0}});
  CHECK(violations.empty());
}

TEST_CASE("axiom check reports asymmetry with its witness") {
  const auto violations = check_metric_axioms({{0, 1}, {2, 0}});
  REQUIRE(!violations.empty());
  const auto& v = violations.front();
  CHECK(v.axiom == MetricAxiom::Symmetry);
  CHECK(v.i == 0);
  CHECK(v.j == 1);
}

TEST_CASE("axiom check finds the triangle violation at (0,2,1)") {
  const auto violations = check_metric_axioms({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}});
  REQUIRE(!violations.empty());
  const auto& v = violations.front();
  CHECK(v.axiom == MetricAxiom::Triangle);
  CHECK(v.i == 0);
  CHECK(v.j == 2);
  CHECK(v.k == 1);
  CHECK(v.lhs == 3.0);
  CHECK(v.rhs == 2.0);
}

TEST_CASE("axiom check flags zero and negative off-diagonal entries") {
  const auto zero = check_metric_axioms({{0, 0}, {0, 0}});
  REQUIRE(!zero.empty());
  CHECK(zero.front().axiom == MetricAxiom::Positivity);

  const auto diag = check_metric_axioms({{0.5, 1}, {1, 0}});
  REQUIRE(!diag.empty());
  CHECK(diag.front().axiom == MetricAxiom::ZeroDiagonal);
}

TEST_CASE("axiom check rejects malformed matrices") {
  CHECK_THROWS_AS(check_metric_axioms({{0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(check_metric_axioms({{0, 1}, {1, 0, 2}}),
                  std::invalid_argument);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(check_metric_axioms({{0, inf}, {inf, 0}}),
                  std::invalid_argument);
}

TEST_CASE("repair_triangle computes the shortest-path closure") {
  const DistanceMatrix repaired =
      repair_triangle({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}});
  const DistanceMatrix expect{{0, 1, 2}, {1, 0, 1}, {2, 1, 0}};
  CHECK(repaired == expect);
  CHECK(repair_triangle(repaired) == repaired);  // idempotent
}

TEST_CASE("repair_triangle leaves valid metrics alone") {
  const DistanceMatrix two{{0, 5}, {5, 0}};
  CHECK(repair_triangle(two) == two);
  const DistanceMatrix line{{0, 1, 3}, {1, 0, 2}, {3, 2, 0}};
  CHECK(repair_triangle(line) == line);
}

TEST_CASE("repair_triangle validates its input") {
  CHECK_THROWS_AS(repair_triangle({{0, 1}, {2, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(repair_triangle({{0, -1}, {-1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(repair_triangle({{1, 1}, {1, 0}}), std::invalid_argument);
}

TEST_CASE("repaired random symmetric matrices satisfy every axiom") {
  Rng rng(123);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + rng.uniform_int(9);
    DistanceMatrix dist(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        dist[i][j] = dist[j][i] = rng.uniform(0.05, 2.0);
      }
    }
    const DistanceMatrix repaired = repair_triangle(dist);
    CHECK(check_metric_axioms(repaired).empty());
    CHECK(repair_triangle(repaired) == repaired);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        CHECK(repaired[i][j] <= dist[i][j]);  // closure never grows entries
      }
    }
  }
}

TEST_CASE("space construction validates labels and axioms") {
  CHECK_THROWS_AS(FiniteMetricSpace({"a", "a"}, {{0, 1}, {1, 0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(FiniteMetricSpace({"a", "b"}, {{0, 1}, {2, 0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(FiniteMetricSpace({"a"}, {{0, 1}, {1, 0}}),
                  std::invalid_argument);

  const auto space = line3();
  CHECK(space.size() == 3);
  CHECK(space.label(2) == "3");
  CHECK(space.index_of("1") == 1);
  CHECK(!space.index_of("7").has_value());
  CHECK(space.dist(0, 2) == 3.0);
}

TEST_CASE("distance_values lists distinct positive distances in order") {
  const auto values = line4().distance_values();
  CHECK(values == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("point sets are sorted, deduplicated and validated") {
  const PointSet a({2, 0, 2}, 3);
  CHECK(a.members() == std::vector<int>{0, 2});
  CHECK(a.contains(2));
  CHECK(!a.contains(1));
  CHECK(a == PointSet({0, 2}, 3));
  CHECK_THROWS_AS(PointSet({}, 3), std::invalid_argument);
  CHECK_THROWS_AS(PointSet({3}, 3), std::invalid_argument);
  CHECK_THROWS_AS(PointSet({-1}, 3), std::invalid_argument);
}

TEST_CASE("maps validate their image tables") {
  CHECK_THROWS_AS(SingleValuedMap({0, 3}, 3), std::invalid_argument);
  CHECK_THROWS_AS(SingleValuedMap({0}, 3), std::invalid_argument);
  const SingleValuedMap t({1, 0, 0}, 3);
  CHECK(t.apply(0) == 1);

  CHECK_THROWS_AS(MultiValuedMap({PointSet({0}, 3)}, 3),
                  std::invalid_argument);
  const MultiValuedMap m({PointSet({0, 1}, 3), PointSet({0}, 3),
                          PointSet({2}, 3)},
                         3);
  CHECK(m.apply(0).contains(1));
}

TEST_CASE("point_to_set_distance takes the nearest member") {
  const auto space = line3();
  const PointSet a01({0, 1}, 3);
  CHECK(point_to_set_distance(space, 2, a01) == 2.0);  // min(3, 2)
  CHECK(point_to_set_distance(space, 0, a01) == 0.0);  // membership
  const PointSet single({1}, 3);
  CHECK(point_to_set_distance(space, 2, single) == space.dist(2, 1));
}

TEST_CASE("hausdorff distance matches the worked line example") {
  const auto space = line4();
  const PointSet a({0, 1}, 4);
  const PointSet b({3}, 4);
  CHECK(hausdorff_distance(space, a, b) == 3.0);
  CHECK(directed_hausdorff(space, b, a) == 2.0);
  CHECK(directed_hausdorff(space, a, b) == 3.0);
}

TEST_CASE("hausdorff distance on equal sets and singletons") {
  const auto space = line4();
  const PointSet a({0, 2}, 4);
  CHECK(hausdorff_distance(space, a, a) == 0.0);
  CHECK(hausdorff_distance(space, PointSet({0}, 4), PointSet({1}, 4)) ==
        space.dist(0, 1));
}

TEST_CASE("hausdorff agrees with a double-loop oracle on all subset pairs") {
  Rng rng(7);
  const FiniteMetricSpace space = random_space(rng, 5);
  const int n = space.size();

  auto subset = [&](unsigned mask) {
    std::vector<int> members;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) members.push_back(i);
    }
    return PointSet(std::move(members), n);
  };
  auto oracle = [&](const PointSet& a, const PointSet& b) {
    double h = 0.0;
    for (int x : a.members()) {
      double nearest = std::numeric_limits<double>::infinity();
      for (int y : b.members()) nearest = std::min(nearest, space.dist(x, y));
      h = std::max(h, nearest);
    }
    for (int y : b.members()) {
      double nearest = std::numeric_limits<double>::infinity();
      for (int x : a.members()) nearest = std::min(nearest, space.dist(x, y));
      h = std::max(h, nearest);
    }
    return h;
  };

  for (unsigned ma = 1; ma < (1u << n); ++ma) {
    for (unsigned mb = 1; mb < (1u << n); ++mb) {
      const PointSet a = subset(ma);
      const PointSet b = subset(mb);
      const double h = hausdorff_distance(space, a, b);
      CHECK(h == oracle(a, b));
      CHECK(h == hausdorff_distance(space, b, a));
      CHECK((h == 0.0) == (a == b));
    }
  }
}

TEST_CASE("hausdorff satisfies the triangle inequality on random triples") {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const FiniteMetricSpace space = random_space(rng, 2 + rng.uniform_int(7));
    const PointSet a = random_point_set(rng, space.size());
    const PointSet b = random_point_set(rng, space.size());
    const PointSet c = random_point_set(rng, space.size());
    const double ac = hausdorff_distance(space, a, c);
    const double ab = hausdorff_distance(space, a, b);
    const double bc = hausdorff_distance(space, b, c);
    CHECK(ac <= ab + bc + kCompositeTol);
  }
}
