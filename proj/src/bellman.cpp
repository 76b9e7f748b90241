#include "cfp/bellman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cfp/rng.hpp"

namespace cfp {

const char* to_string(AggregatorForm form) {
  switch (form) {
    case AggregatorForm::Constant:
      return "constant";
    case AggregatorForm::Affine:
      return "affine";
    case AggregatorForm::Tabulated:
      return "tabulated";
  }
  return "unknown";
}

AggregatorForm aggregator_form_from_string(const std::string& text) {
  if (text == "constant") return AggregatorForm::Constant;
  if (text == "affine") return AggregatorForm::Affine;
  if (text == "tabulated") return AggregatorForm::Tabulated;
  throw std::invalid_argument("unknown aggregator form: " + text);
}

namespace {

void require_finite(double v, const char* who) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(who) + ": non-finite value");
  }
}

// Piecewise-linear evaluation with end segments extended linearly.  Unlike
// gauge tables, aggregator profiles may take negative values and negative
// arguments, so there is no clamping.
double pl_eval(const std::vector<GaugePoint>& pts, double t) {
  if (pts.size() == 1) return pts.front().value;
  std::size_t hi = 1;
  while (hi + 1 < pts.size() && t > pts[hi].t) ++hi;
  const auto& a = pts[hi - 1];
  const auto& b = pts[hi];
  const double w = (t - a.t) / (b.t - a.t);
  return a.value + w * (b.value - a.value);
}

}  // namespace

Aggregator Aggregator::constant(double c) {
  require_finite(c, "Aggregator::constant");
  Aggregator a;
  a.form_ = AggregatorForm::Constant;
  a.c_ = c;
  return a;
}

Aggregator Aggregator::affine(double c, double beta) {
  require_finite(c, "Aggregator::affine");
  require_finite(beta, "Aggregator::affine");
  Aggregator a;
  a.form_ = AggregatorForm::Affine;
  a.c_ = c;
  a.beta_ = beta;
  a.lipschitz_ = std::fabs(beta);
  return a;
}

Aggregator Aggregator::tabulated(std::vector<GaugePoint> points) {
  if (points.empty()) {
    throw std::invalid_argument("Aggregator::tabulated: empty table");
  }
  for (const auto& p : points) {
    require_finite(p.t, "Aggregator::tabulated");
    require_finite(p.value, "Aggregator::tabulated");
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i - 1].t < points[i].t)) {
      throw std::invalid_argument(
          "Aggregator::tabulated: abscissae must be strictly increasing");
    }
  }
  Aggregator a;
  a.form_ = AggregatorForm::Tabulated;
  double lip = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double slope = (points[i].value - points[i - 1].value) /
                         (points[i].t - points[i - 1].t);
    lip = std::max(lip, std::fabs(slope));
  }
  a.lipschitz_ = lip;
  a.domain_lo_ = points.front().t;
  a.domain_hi_ = points.back().t;
  a.points_ = std::move(points);
  return a;
}

double Aggregator::eval(int, int, double t) const {
  switch (form_) {
    case AggregatorForm::Constant:
      return c_;
    case AggregatorForm::Affine:
      return c_ + beta_ * t;
    case AggregatorForm::Tabulated:
      return pl_eval(points_, t);
  }
  return c_;
}

double Aggregator::beta() const {
  if (form_ == AggregatorForm::Tabulated) {
    throw std::logic_error("Aggregator::beta: tabulated form has no slope");
  }
  return beta_;
}

double Aggregator::lipschitz() const { return lipschitz_; }

std::string Aggregator::describe() const {
  std::ostringstream os;
  os << to_string(form_);
  switch (form_) {
    case AggregatorForm::Constant:
      os << "(" << c_ << ")";
      break;
    case AggregatorForm::Affine:
      os << "(" << c_ << " + " << beta_ << "*t)";
      break;
    case AggregatorForm::Tabulated:
      os << "(" << points_.size() << " points, lipschitz " << lipschitz_
         << ")";
      break;
  }
  return os.str();
}

BellmanProblem::BellmanProblem(std::vector<std::string> states,
                               std::vector<std::string> decisions,
                               std::vector<std::vector<double>> reward,
                               std::vector<std::vector<int>> transition,
                               Aggregator aggregator)
    : states_(std::move(states)),
      decisions_(std::move(decisions)),
      reward_(std::move(reward)),
      transition_(std::move(transition)),
      aggregator_(std::move(aggregator)) {
  if (states_.empty()) {
    throw std::invalid_argument("BellmanProblem: no states");
  }
  if (decisions_.empty()) {
    throw std::invalid_argument("BellmanProblem: no decisions");
  }
  const std::size_t w = states_.size();
  const std::size_t d = decisions_.size();
  if (reward_.size() != w || transition_.size() != w) {
    throw std::invalid_argument(
        "BellmanProblem: reward/transition row count must match states");
  }
  for (std::size_t x = 0; x < w; ++x) {
    if (reward_[x].size() != d || transition_[x].size() != d) {
      throw std::invalid_argument(
          "BellmanProblem: reward/transition column count must match "
          "decisions");
    }
    for (std::size_t y = 0; y < d; ++y) {
      require_finite(reward_[x][y], "BellmanProblem");
      const int s = transition_[x][y];
      if (s < 0 || s >= static_cast<int>(w)) {
        throw std::invalid_argument(
            "BellmanProblem: transition target out of range");
      }
    }
  }
}

double sup_metric(const ValueFunction& h, const ValueFunction& k) {
  if (h.empty() || h.size() != k.size()) {
    throw std::invalid_argument("sup_metric: size mismatch");
  }
  double best = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    best = std::max(best, std::fabs(h[i] - k[i]));
  }
  return best;
}

ValueFunction bellman_operator(const BellmanProblem& problem,
                               const ValueFunction& h) {
  if (static_cast<int>(h.size()) != problem.state_count()) {
    throw std::invalid_argument(
        "bellman_operator: value function size must match states");
  }
  const auto& agg = problem.aggregator();
  ValueFunction out(h.size());
  for (int x = 0; x < problem.state_count(); ++x) {
    double best = -std::numeric_limits<double>::infinity();
    for (int y = 0; y < problem.decision_count(); ++y) {
      const double term =
          problem.reward(x, y) + agg.eval(x, y, h[problem.transition(x, y)]);
      if (!std::isfinite(term)) {
        std::ostringstream os;
        os << "bellman_operator: non-finite term at state "
           << problem.states()[x] << ", decision " << problem.decisions()[y];
        throw std::runtime_error(os.str());
      }
      best = std::max(best, term);
    }
    out[x] = best;
  }
  return out;
}

namespace {

BellmanCheck analytic_pass(const char* name, std::string detail) {
  BellmanCheck check;
  check.name = name;
  check.pass = true;
  check.basis = "analytic";
  check.detail = std::move(detail);
  return check;
}

BellmanCheck analytic_fail(const char* name, std::string detail) {
  BellmanCheck check;
  check.name = name;
  check.pass = false;
  check.basis = "analytic";
  check.detail = std::move(detail);
  return check;
}

// The split modulus: quadratic below 1, linear above.  Shared with the
// gauge library so both certifiers agree bit for bit.
double rho_modulus(double t) { return Gauge::rho().eval(t); }

BellmanCheck check_strict_rho(const BellmanProblem& problem, int samples,
                              Rng& rng, int& drawn) {
  const auto& agg = problem.aggregator();
  switch (agg.form()) {
    case AggregatorForm::Constant:
      return analytic_pass("strict-rho",
                           "constant aggregator: increments are zero");
    case AggregatorForm::Affine: {
      const double beta = agg.beta();
      if (beta == 0.0) {
        return analytic_pass("strict-rho",
                             "affine aggregator with zero slope");
      }
      // An affine slope cannot sit below the quadratic branch near zero:
      // constant value functions at distance eps give increment |beta|*eps,
      // while the modulus allows only eps^2/2.
      const double eps = std::min(0.1, std::fabs(beta));
      BellmanCheck check =
          analytic_fail("strict-rho",
                        "affine slope exceeds the quadratic modulus at "
                        "small distances");
      BellmanWitness w;
      w.x = 0;
      w.y = 0;
      w.h_at_x = 0.0;
      w.k_at_x = eps;
      w.d_hk = eps;
      w.lhs = std::fabs(agg.eval(0, 0, 0.0) - agg.eval(0, 0, eps));
      w.rhs = rho_modulus(eps);
      check.witness = w;
      return check;
    }
    case AggregatorForm::Tabulated:
      break;
  }

  // Tabulated: sample value-function pairs around the profile's support.
  const int n = problem.state_count();
  const double pad = 0.5 * (agg.domain_hi() - agg.domain_lo()) + 0.25;
  const double lo = agg.domain_lo() - pad;
  const double hi = agg.domain_hi() + pad;
  BellmanCheck check;
  check.name = "strict-rho";
  check.basis = "sampled";
  check.pass = true;
  for (int s = 0; s < samples; ++s) {
    ValueFunction h(n);
    ValueFunction k(n);
    for (int i = 0; i < n; ++i) h[i] = rng.uniform(lo, hi);
    for (int i = 0; i < n; ++i) k[i] = rng.uniform(lo, hi);
    ++drawn;
    const double d = sup_metric(h, k);
    const double bound = rho_modulus(d);
    for (int x = 0; x < n && check.pass; ++x) {
      for (int y = 0; y < problem.decision_count(); ++y) {
        const double lhs =
            std::fabs(agg.eval(x, y, h[x]) - agg.eval(x, y, k[x]));
        if (lhs > bound) {
          check.pass = false;
          BellmanWitness w;
          w.x = x;
          w.y = y;
          w.h_at_x = h[x];
          w.k_at_x = k[x];
          w.d_hk = d;
          w.lhs = lhs;
          w.rhs = bound;
          check.witness = w;
          break;
        }
      }
    }
    if (!check.pass) break;
  }
  std::ostringstream os;
  os << (check.pass ? "no violation in " : "violated within ") << drawn
     << " sampled pairs";
  check.detail = os.str();
  return check;
}

}  // namespace

BellmanCertificate certify_bellman(const BellmanProblem& problem, int samples,
                                   std::uint64_t seed) {
  if (samples <= 0) {
    throw std::invalid_argument("certify_bellman: samples must be positive");
  }
  const auto& agg = problem.aggregator();
  BellmanCertificate cert;
  cert.seed = seed;
  cert.beta = agg.lipschitz();

  Rng rng(seed);
  int drawn = 0;
  cert.strict_rho = check_strict_rho(problem, samples, rng, drawn);
  cert.samples = drawn;

  std::ostringstream os;
  os << "lipschitz constant " << cert.beta
     << (cert.beta < 1.0 ? " < 1" : " >= 1");
  cert.banach_beta = cert.beta < 1.0
                         ? analytic_pass("banach-beta", os.str())
                         : analytic_fail("banach-beta", os.str());
  return cert;
}

BellmanSolution solve_bellman(const BellmanProblem& problem,
                              const ValueFunction& h0, double tol,
                              int max_iter) {
  if (static_cast<int>(h0.size()) != problem.state_count()) {
    throw std::invalid_argument(
        "solve_bellman: starting function size must match states");
  }
  if (!(tol >= 0.0)) {
    throw std::invalid_argument("solve_bellman: tolerance must be >= 0");
  }
  if (max_iter < 0) {
    throw std::invalid_argument("solve_bellman: negative iteration budget");
  }

  BellmanSolution solution;
  solution.value = h0;
  auto& trace = solution.trace;
  for (int it = 0; it < max_iter; ++it) {
    ValueFunction next = bellman_operator(problem, solution.value);
    const double delta = sup_metric(next, solution.value);
    trace.deltas.push_back(delta);
    solution.value = std::move(next);
    if (delta <= tol) {
      trace.converged = true;
      break;
    }
  }
  trace.iterations = static_cast<int>(trace.deltas.size());
  trace.residual =
      sup_metric(solution.value, bellman_operator(problem, solution.value));
  return solution;
}

}  // namespace cfp
