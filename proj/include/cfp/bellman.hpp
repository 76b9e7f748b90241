#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cfp/gauge.hpp"

namespace cfp {

/// How the aggregator combines a (state, decision) pair with the value of
/// the successor state.  eval(x, y, t) must be Lipschitz in t with constant
/// below 1 for the dynamic-programming operator to contract.
enum class AggregatorForm { Constant, Affine, Tabulated };

const char* to_string(AggregatorForm form);
AggregatorForm aggregator_form_from_string(const std::string& text);

/// ℑ(x, y, t) in the functional equation.  Constant ignores t; Affine is
/// c + beta * t; Tabulated applies a piecewise-linear profile to t
/// (independent of x and y, like the other built-in forms).
class Aggregator {
 public:
  static Aggregator constant(double c);
  static Aggregator affine(double c, double beta);
  static Aggregator tabulated(std::vector<GaugePoint> points);

  double eval(int x, int y, double t) const;
  AggregatorForm form() const { return form_; }

  /// Affine slope; 0 for Constant.  Throws std::logic_error for Tabulated.
  double beta() const;

  /// Smallest known Lipschitz constant in t: |beta| for Affine, 0 for
  /// Constant, max absolute segment slope for Tabulated.
  double lipschitz() const;

  /// Interval of t values the aggregator is designed for: the table support
  /// for Tabulated, [-1, 1] otherwise.  Sampling-based checks draw from a
  /// slightly padded copy of this interval.
  double domain_lo() const { return domain_lo_; }
  double domain_hi() const { return domain_hi_; }

  std::string describe() const;

 private:
  Aggregator() = default;

  AggregatorForm form_ = AggregatorForm::Constant;
  double c_ = 0.0;
  double beta_ = 0.0;
  std::vector<GaugePoint> points_;
  double lipschitz_ = 0.0;
  double domain_lo_ = -1.0;
  double domain_hi_ = 1.0;
};

/// Finite dynamic-programming problem: states W, decision set D, reward
/// f(x, y), deterministic transition eta(x, y) in W, and an aggregator.
/// The value space is the set of functions W -> R with the sup metric.
class BellmanProblem {
 public:
  BellmanProblem(std::vector<std::string> states,
                 std::vector<std::string> decisions,
                 std::vector<std::vector<double>> reward,
                 std::vector<std::vector<int>> transition, Aggregator aggregator);

  int state_count() const { return static_cast<int>(states_.size()); }
  int decision_count() const { return static_cast<int>(decisions_.size()); }
  const std::vector<std::string>& states() const { return states_; }
  const std::vector<std::string>& decisions() const { return decisions_; }
  double reward(int x, int y) const { return reward_[x][y]; }
  int transition(int x, int y) const { return transition_[x][y]; }
  const Aggregator& aggregator() const { return aggregator_; }

 private:
  std::vector<std::string> states_;
  std::vector<std::string> decisions_;
  std::vector<std::vector<double>> reward_;
  std::vector<std::vector<int>> transition_;
  Aggregator aggregator_;
};

using ValueFunction = std::vector<double>;

/// max_x |h(x) - k(x)|; requires equal nonzero sizes.
double sup_metric(const ValueFunction& h, const ValueFunction& k);

/// One application of the dynamic-programming operator:
///   (T h)(x) = max_y { f(x, y) + agg(x, y, h(eta(x, y))) }.
/// Throws std::runtime_error naming the offending (state, decision) pair if
/// any term evaluates non-finite.
ValueFunction bellman_operator(const BellmanProblem& problem,
                               const ValueFunction& h);

struct BellmanWitness {
  int x = 0;
  int y = 0;
  double h_at_x = 0.0;
  double k_at_x = 0.0;
  double d_hk = 0.0;
  double lhs = 0.0;  // |agg(x,y,h(x)) - agg(x,y,k(x))|
  double rhs = 0.0;  // the bound that failed
};

struct BellmanCheck {
  std::string name;
  bool pass = false;
  std::string basis;  // "analytic" or "sampled"
  std::string detail;
  std::optional<BellmanWitness> witness;
};

/// Result of certify_bellman: strict_rho checks the aggregator against the
/// split modulus rho (quadratic below 1, linear above); banach_beta checks
/// the plain Lipschitz-below-one route.  Either passing certifies that the
/// operator admits a unique value function.
struct BellmanCertificate {
  BellmanCheck strict_rho;
  BellmanCheck banach_beta;
  double beta = 0.0;  // Lipschitz constant used by banach_beta
  int samples = 0;
  std::uint64_t seed = 0;

  bool pass() const { return strict_rho.pass || banach_beta.pass; }
};

/// Checks the two sufficient conditions for the aggregator.  Constant and
/// Affine forms are decided analytically; Tabulated profiles are sampled at
/// `samples` seeded value-function pairs per check.
BellmanCertificate certify_bellman(const BellmanProblem& problem, int samples,
                                   std::uint64_t seed);

struct SolveTrace {
  std::vector<double> deltas;  // sup_metric between successive iterates
  double residual = 0.0;       // sup_metric(h, T h) at the returned h
  int iterations = 0;
  bool converged = false;
};

struct BellmanSolution {
  ValueFunction value;
  SolveTrace trace;
};

/// Iterates the operator from h0 until the step delta falls within tol or
/// max_iter steps elapse.  The residual is recomputed from the returned
/// value function, independently of the loop bookkeeping.
BellmanSolution solve_bellman(const BellmanProblem& problem,
                              const ValueFunction& h0, double tol,
                              int max_iter);

}  // namespace cfp
