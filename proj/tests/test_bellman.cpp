#include <doctest.h>

#include <cmath>
#include <string>

#include "cfp/bellman.hpp"
#include "cfp/generate.hpp"
#include "cfp/rng.hpp"

using namespace cfp;

namespace {

// One state, one decision, reward 1, aggregator 0.5 t: T(h) = 1 + h/2 with
// the unique value function h = 2.
BellmanProblem unit_problem(double beta = 0.5) {
  return BellmanProblem({"s"}, {"a"}, {{1.0}}, {{0}},
                        Aggregator::affine(0.0, beta));
}

}  // namespace

TEST_CASE("sup metric is the max coordinate gap") {
  CHECK(sup_metric({0.0, 1.0}, {0.5, 0.0}) == 1.0);
  CHECK(sup_metric({2.0, 3.0}, {2.0, 3.0}) == 0.0);
  CHECK(sup_metric({1.5}, {-0.5}) == 2.0);
  CHECK_THROWS_AS(sup_metric({1.0}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(sup_metric({}, {}), std::invalid_argument);
}

TEST_CASE("aggregator forms evaluate their closed forms") {
  const Aggregator constant = Aggregator::constant(2.5);
  CHECK(constant.eval(0, 0, 100.0) == 2.5);
  CHECK(constant.lipschitz() == 0.0);
  CHECK(constant.beta() == 0.0);

  const Aggregator affine = Aggregator::affine(1.0, -0.5);
  CHECK(affine.eval(0, 0, 4.0) == -1.0);
  CHECK(affine.beta() == -0.5);
  CHECK(affine.lipschitz() == 0.5);

  const Aggregator table =
      Aggregator::tabulated({{0.0, 0.0}, {1.0, 2.0}, {3.0, 2.0}});
  CHECK(table.eval(0, 0, 0.5) == 1.0);
  CHECK(table.lipschitz() == 2.0);
  CHECK(table.domain_lo() == 0.0);
  CHECK(table.domain_hi() == 3.0);
  CHECK_THROWS_AS(table.beta(), std::logic_error);
  CHECK(!table.describe().empty());
}

TEST_CASE("aggregator construction validates its input") {
  CHECK_THROWS_AS(Aggregator::tabulated({}), std::invalid_argument);
  CHECK_THROWS_AS(Aggregator::tabulated({{1.0, 0.0}, {1.0, 1.0}}),
                  std::invalid_argument);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(Aggregator::affine(inf, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(Aggregator::constant(inf), std::invalid_argument);
}

TEST_CASE("aggregator form names round-trip") {
  for (AggregatorForm form : {AggregatorForm::Constant, AggregatorForm::Affine,
                              AggregatorForm::Tabulated}) {
    CHECK(aggregator_form_from_string(to_string(form)) == form);
  }
  CHECK_THROWS_AS(aggregator_form_from_string("nope"), std::invalid_argument);
}

TEST_CASE("problem construction validates shapes and ranges") {
  CHECK_THROWS_AS(BellmanProblem({}, {"a"}, {}, {}, Aggregator::constant(0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      BellmanProblem({"s"}, {}, {{}}, {{}}, Aggregator::constant(0)),
      std::invalid_argument);
  CHECK_THROWS_AS(BellmanProblem({"s"}, {"a"}, {{1.0, 2.0}}, {{0}},
                                 Aggregator::constant(0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      BellmanProblem({"s"}, {"a"}, {{1.0}}, {{1}}, Aggregator::constant(0)),
      std::invalid_argument);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(
      BellmanProblem({"s"}, {"a"}, {{inf}}, {{0}}, Aggregator::constant(0)),
      std::invalid_argument);
}

TEST_CASE("operator maximizes reward plus aggregated successor value") {
  const auto unit = unit_problem();
  CHECK(bellman_operator(unit, {0.0}) == ValueFunction{1.0});
  CHECK(bellman_operator(unit, {1.0}) == ValueFunction{1.5});

  const BellmanProblem pick({"s"}, {"a", "b"}, {{2.0, 5.0}}, {{0, 0}},
                            Aggregator::constant(0.0));
  CHECK(bellman_operator(pick, {7.0}) == ValueFunction{5.0});

  // Both decisions route through state 1, exercising the transition table.
  const BellmanProblem chain({"s0", "s1"}, {"a"}, {{0.0}, {0.0}}, {{1}, {1}},
                             Aggregator::affine(0.0, 0.5));
  CHECK(bellman_operator(chain, {3.0, 4.0}) == ValueFunction{2.0, 2.0});
}

TEST_CASE("operator reports the state and decision of a non-finite term") {
  const BellmanProblem hot({"badstate"}, {"act"}, {{1e308}}, {{0}},
                           Aggregator::affine(1e308, 0.5));
  try {
    bellman_operator(hot, {0.0});
    FAIL("expected std::runtime_error");
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    CHECK(what.find("badstate") != std::string::npos);
    CHECK(what.find("act") != std::string::npos);
  }
}

TEST_CASE("constant aggregators certify analytically on both routes") {
  const BellmanProblem p({"s"}, {"a"}, {{1.0}}, {{0}},
                         Aggregator::constant(3.0));
  const auto cert = certify_bellman(p, 50, 1);
  CHECK(cert.strict_rho.pass);
  CHECK(cert.strict_rho.basis == "analytic");
  CHECK(cert.banach_beta.pass);
  CHECK(cert.beta == 0.0);
  CHECK(cert.pass());
}

TEST_CASE("affine slope fails the split-modulus route with a witness") {
  const auto cert = certify_bellman(unit_problem(), 50, 1);
  CHECK(!cert.strict_rho.pass);
  CHECK(cert.strict_rho.basis == "analytic");
  REQUIRE(cert.strict_rho.witness.has_value());
  const BellmanWitness& w = *cert.strict_rho.witness;
  // The witness reproduces: evaluating the aggregator at the recorded pair
  // gives a gap above the split modulus of the sup distance.
  const Aggregator& agg = unit_problem().aggregator();
  CHECK(std::fabs(agg.eval(w.x, w.y, w.h_at_x) - agg.eval(w.x, w.y, w.k_at_x)) ==
        w.lhs);
  CHECK(Gauge::rho().eval(w.d_hk) == w.rhs);
  CHECK(w.lhs > w.rhs);

  CHECK(cert.banach_beta.pass);
  CHECK(cert.banach_beta.basis == "analytic");
  CHECK(cert.beta == 0.5);
  CHECK(cert.pass());
}

TEST_CASE("a unit slope fails both certification routes") {
  const auto cert = certify_bellman(unit_problem(1.0), 50, 1);
  CHECK(!cert.strict_rho.pass);
  CHECK(!cert.banach_beta.pass);
  CHECK(!cert.pass());
}

TEST_CASE("tabulated aggregators are certified by sampling") {
  const BellmanProblem flat({"s"}, {"a"}, {{1.0}}, {{0}},
                            Aggregator::tabulated({{0.0, 1.0}, {5.0, 1.0}}));
  const auto flat_cert = certify_bellman(flat, 200, 7);
  CHECK(flat_cert.strict_rho.pass);
  CHECK(flat_cert.strict_rho.basis == "sampled");
  CHECK(flat_cert.banach_beta.pass);
  CHECK(flat_cert.samples == 200);
  CHECK(flat_cert.seed == 7);

  // Slope one half: contractive in the plain sense, but small gaps violate
  // the quadratic branch of the split modulus and sampling finds one.
  const BellmanProblem half({"s"}, {"a"}, {{1.0}}, {{0}},
                            Aggregator::tabulated({{0.0, 0.0}, {4.0, 2.0}}));
  const auto cert = certify_bellman(half, 200, 7);
  CHECK(!cert.strict_rho.pass);
  REQUIRE(cert.strict_rho.witness.has_value());
  const BellmanWitness& w = *cert.strict_rho.witness;
  const Aggregator& agg = half.aggregator();
  CHECK(std::fabs(agg.eval(w.x, w.y, w.h_at_x) - agg.eval(w.x, w.y, w.k_at_x)) ==
        w.lhs);
  CHECK(Gauge::rho().eval(w.d_hk) == w.rhs);
  CHECK(w.lhs > w.rhs);
  CHECK(cert.banach_beta.pass);  // Lipschitz 0.5 stays below one
  CHECK(cert.pass());

  CHECK_THROWS_AS(certify_bellman(half, 0, 7), std::invalid_argument);
}

TEST_CASE("value iteration solves the closed-form problem") {
  const auto solution = solve_bellman(unit_problem(), {0.0}, 1e-12, 200);
  REQUIRE(solution.value.size() == 1);
  CHECK(std::fabs(solution.value[0] - 2.0) <= 1e-10);
  CHECK(solution.trace.converged);
  CHECK(solution.trace.residual <= 1e-8);
  for (std::size_t i = 1; i < solution.trace.deltas.size(); ++i) {
    CHECK(solution.trace.deltas[i] <=
          0.5 * solution.trace.deltas[i - 1] + 1e-12);
  }
}

TEST_CASE("value iteration is independent of the starting guess") {
  const auto from_zero = solve_bellman(unit_problem(), {0.0}, 1e-12, 200);
  const auto from_far = solve_bellman(unit_problem(), {100.0}, 1e-12, 200);
  CHECK(std::fabs(from_zero.value[0] - from_far.value[0]) <= 1e-9);
}

TEST_CASE("value iteration stops immediately at a fixed point") {
  const BellmanProblem zero({"s"}, {"a"}, {{0.0}}, {{0}},
                            Aggregator::affine(0.0, 0.9));
  const auto solution = solve_bellman(zero, {0.0}, 1e-9, 50);
  CHECK(solution.value == ValueFunction{0.0});
  CHECK(solution.trace.converged);
  CHECK(solution.trace.iterations == 1);
}

TEST_CASE("a slope near one exhausts a small budget without converging") {
  const auto solution = solve_bellman(unit_problem(0.999), {0.0}, 1e-9, 10);
  CHECK(!solution.trace.converged);
  CHECK(solution.trace.iterations == 10);
  CHECK(solution.trace.deltas.size() == 10);
}

TEST_CASE("solve validates its arguments") {
  const auto unit = unit_problem();
  CHECK_THROWS_AS(solve_bellman(unit, {0.0, 1.0}, 1e-9, 10),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_bellman(unit, {0.0}, -1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(solve_bellman(unit, {0.0}, 1e-9, -1), std::invalid_argument);
}

TEST_CASE("the operator is monotone for nonnegative affine slopes") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const BellmanProblem problem = random_bellman_problem(rng, 8, 5, 0.9);
    ValueFunction h = random_value_function(rng, problem.state_count(), -2.0, 2.0);
    ValueFunction k = h;
    for (double& v : k) v += rng.uniform(0.0, 1.0);
    const ValueFunction th = bellman_operator(problem, h);
    const ValueFunction tk = bellman_operator(problem, k);
    for (int x = 0; x < problem.state_count(); ++x) {
      CHECK(th[x] <= tk[x] + 1e-12);
    }
  }
}

TEST_CASE("random contractive problems converge geometrically") {
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const BellmanProblem problem = random_bellman_problem(rng, 10, 6, 0.9);
    const double beta = problem.aggregator().lipschitz();
    const auto cert = certify_bellman(problem, 50, 3);
    CHECK(cert.banach_beta.pass);
    const auto solution = solve_bellman(
        problem, ValueFunction(problem.state_count(), 0.0), 1e-9, 4000);
    CHECK(solution.trace.converged);
    CHECK(solution.trace.residual <= 1e-8);
    const auto& deltas = solution.trace.deltas;
    for (std::size_t i = 1; i < deltas.size(); ++i) {
      CHECK(deltas[i] <= beta * deltas[i - 1] + 1e-12);
    }
  }
}
