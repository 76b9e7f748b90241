#include "cfp/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cfp/bellman.hpp"
#include "cfp/certify.hpp"
#include "cfp/generate.hpp"
#include "cfp/iterate.hpp"
#include "cfp/rng.hpp"

namespace cfp {

bool SelftestReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const SelftestCheck& c) { return c.pass; });
}

namespace {

constexpr int kSweepSpaces = 200;
constexpr int kMapsPerSpace = 50;
constexpr double kAlphaCutoff = 0.9;
constexpr int kMultiMaps = 100;
constexpr int kHausdorffPairs = 1000;
constexpr int kHausdorffTriples = 1000;
constexpr int kBellmanProblems = 50;
constexpr double kTelescopeTol = 1e-9;

// One contraction-certified self-map from the sweep, with its tight
// modulus and the Picard traces from every start (potentials attached).
struct CertifiedEntry {
  int space_idx;
  SingleValuedMap map;
  double alpha;
  std::vector<IterationTrace> traces;
};

struct Sweep {
  std::vector<FiniteMetricSpace> spaces;
  std::vector<CertifiedEntry> certified;
  long total_maps = 0;
};

// Collects failures for one check; only the first diagnostic is kept so the
// detail line stays short and deterministic.
class CheckLog {
 public:
  explicit CheckLog(std::string name) : name_(std::move(name)) {}

  void fail(const std::string& message) {
    ++failures_;
    if (first_.empty()) first_ = message;
  }

  bool ok() const { return failures_ == 0; }

  SelftestCheck finish(const std::string& counters) const {
    SelftestCheck check;
    check.name = name_;
    check.pass = failures_ == 0;
    std::ostringstream os;
    os << counters;
    if (failures_ > 0) {
      os << "; failures=" << failures_ << "; first: " << first_;
    }
    check.detail = os.str();
    return check;
  }

 private:
  std::string name_;
  long failures_ = 0;
  std::string first_;
};

std::string pair_text(const FiniteMetricSpace& space, const PairWitness& w) {
  std::ostringstream os;
  os << "(" << space.label(w.x) << "," << space.label(w.y) << ") lhs=" << w.lhs
     << " rhs=" << w.rhs;
  return os.str();
}

Sweep build_sweep(std::uint64_t seed, CheckLog& log) {
  Rng rng(seed);
  Sweep sweep;
  sweep.spaces.reserve(kSweepSpaces);
  for (int s = 0; s < kSweepSpaces; ++s) {
    const int n = 3 + rng.uniform_int(10);
    sweep.spaces.push_back(random_space(rng, n));
    const auto& space = sweep.spaces.back();
    for (int k = 0; k < kMapsPerSpace; ++k) {
      SingleValuedMap map = k == 0 ? constant_map(n, rng.uniform_int(n))
                            : k <= kMapsPerSpace / 2 ? random_map(rng, n)
                                                     : hub_map(rng, n);
      ++sweep.total_maps;
      const double alpha = tight_banach_alpha(space, map);
      if (alpha > kAlphaCutoff) continue;

      CertifyOptions opt;
      opt.map_name = "sweep";
      const Certificate cert =
          certify_map(space, map, ConditionKind::Banach, Gauge::banach(alpha),
                      opt);
      if (!cert.pass) {
        std::ostringstream os;
        os << "space " << s << " map " << k
           << ": certificate rejects its own tight modulus " << alpha;
        if (cert.witness) os << " at " << pair_text(space, *cert.witness);
        log.fail(os.str());
        continue;
      }

      std::vector<IterationTrace> traces;
      traces.reserve(n);
      const Gauge eta = Gauge::banach(alpha);
      for (int x0 = 0; x0 < n; ++x0) {
        traces.push_back(picard_iterate(space, map, x0,
                                        StopRule::for_certified(n), &eta));
      }
      sweep.certified.push_back(
          CertifiedEntry{s, std::move(map), alpha, std::move(traces)});
    }
  }
  return sweep;
}

SelftestCheck check_banach_oracle(const Sweep& sweep, CheckLog& log) {
  long orbits = 0;
  for (const auto& entry : sweep.certified) {
    const auto& space = sweep.spaces[entry.space_idx];
    const auto fixed = brute_force_fixed_points(space, entry.map);
    if (fixed.size() != 1) {
      std::ostringstream os;
      os << "certified map (alpha " << entry.alpha << ") has "
         << fixed.size() << " fixed points";
      log.fail(os.str());
      continue;
    }
    for (const auto& trace : entry.traces) {
      ++orbits;
      if (trace.termination != Termination::FixedPoint) {
        std::ostringstream os;
        os << "orbit from " << space.label(trace.points.front())
           << " ended " << to_string(trace.termination) << " (alpha "
           << entry.alpha << ")";
        log.fail(os.str());
      } else if (trace.points.back() != fixed.front()) {
        std::ostringstream os;
        os << "orbit terminal " << space.label(trace.points.back())
           << " differs from the unique fixed point "
           << space.label(fixed.front());
        log.fail(os.str());
      }
    }
  }
  if (sweep.certified.empty()) {
    log.fail("sweep produced no certified maps");
  }
  std::ostringstream os;
  os << "spaces=" << sweep.spaces.size() << " maps=" << sweep.total_maps
     << " certified=" << sweep.certified.size() << " orbits=" << orbits;
  return log.finish(os.str());
}

SelftestCheck check_caristi_descent(const Sweep& sweep) {
  CheckLog log("caristi-descent");
  long tables = 0;
  long steps = 0;
  for (const auto& entry : sweep.certified) {
    const auto& space = sweep.spaces[entry.space_idx];
    const int n = space.size();
    const Gauge theta = midpoint_gauge(Gauge::banach(entry.alpha));

    PointPotential phi;
    phi.name = "descent";
    phi.tol = kCompositeTol;
    phi.value.resize(n);
    for (int x = 0; x < n; ++x) {
      phi.value[x] =
          caristi_potential(theta, space.dist(x, entry.map.apply(x)));
    }
    ++tables;

    const Certificate cert = certify_caristi(space, entry.map, phi);
    if (!cert.pass) {
      std::ostringstream os;
      os << "computed potential table rejected (alpha " << entry.alpha << ")";
      if (cert.witness) os << " at " << pair_text(space, *cert.witness);
      log.fail(os.str());
      continue;
    }

    for (const auto& trace : entry.traces) {
      if (trace.steps_to_fixed_point() > n - 1) {
        std::ostringstream os;
        os << "orbit needed " << trace.steps_to_fixed_point()
           << " moves on " << n << " points";
        log.fail(os.str());
      }
      for (std::size_t i = 0; i + 1 < trace.points.size(); ++i) {
        ++steps;
        const double drop =
            phi.value[trace.points[i]] - phi.value[trace.points[i + 1]];
        if (drop < trace.step_dist[i] - phi.tol) {
          std::ostringstream os;
          os << "potential dropped " << drop << " over a step of "
             << trace.step_dist[i];
          log.fail(os.str());
        }
      }
    }
  }
  std::ostringstream os;
  os << "tables=" << tables << " steps=" << steps;
  return log.finish(os.str());
}

SelftestCheck check_telescoping(const Sweep& sweep, std::uint64_t seed) {
  CheckLog log("telescoping");
  long traces = 0;
  long pairs = 0;
  double worst = 0.0;

  auto audit_one = [&](const FiniteMetricSpace& space,
                       const IterationTrace& trace) {
    ++traces;
    const TelescopingAudit audit =
        audit_telescoping(space, trace, kTelescopeTol);
    pairs += audit.pairs;
    worst = std::max(worst, audit.max_excess);
    if (!audit.pass) {
      std::ostringstream os;
      os << "bound exceeded by " << audit.max_excess << " on an orbit from "
         << space.label(trace.points.front());
      log.fail(os.str());
    }
  };

  for (const auto& entry : sweep.certified) {
    for (const auto& trace : entry.traces) {
      audit_one(sweep.spaces[entry.space_idx], trace);
    }
  }

  // Set-valued sweep: constructed contractions certified against the gauge
  // they were built for, then iterated with the midpoint gauge.
  Rng rng(seed);
  const Gauge eta = Gauge::banach(kMultiMapAlpha);
  const Gauge theta = midpoint_gauge(eta);
  long multi_certified = 0;
  for (int i = 0; i < kMultiMaps; ++i) {
    const int n = 3 + rng.uniform_int(10);
    const FiniteMetricSpace space = random_space(rng, n);
    const MultiValuedMap map = contractive_multi_map(rng, space);
    const Certificate cert =
        certify_map(space, map, ConditionKind::Eta, eta);
    if (!cert.pass) {
      std::ostringstream os;
      os << "constructed set-valued map " << i << " failed its certificate";
      if (cert.witness) os << " at " << pair_text(space, *cert.witness);
      log.fail(os.str());
      continue;
    }
    ++multi_certified;
    const auto fixed = brute_force_fixed_points(space, map);
    for (int x0 = 0; x0 < n; ++x0) {
      try {
        const IterationTrace orbit =
            multivalued_orbit(space, map, x0, theta, StopRule{n * n + 2});
        if (orbit.termination != Termination::FixedPoint) {
          std::ostringstream os;
          os << "set-valued orbit ended " << to_string(orbit.termination);
          log.fail(os.str());
          continue;
        }
        if (std::find(fixed.begin(), fixed.end(), orbit.points.back()) ==
            fixed.end()) {
          log.fail("set-valued orbit terminal is not a fixed point");
          continue;
        }
        audit_one(space, orbit);
      } catch (const SelectionBoundError& e) {
        log.fail(std::string("selection bound violated: ") + e.what());
      }
    }
  }

  std::ostringstream os;
  os << "traces=" << traces << " pairs=" << pairs
     << " multi=" << multi_certified << " max_excess=" << worst;
  return log.finish(os.str());
}

SelftestCheck check_hausdorff_oracle(std::uint64_t seed) {
  CheckLog log("hausdorff-oracle");
  Rng rng(seed);

  std::vector<FiniteMetricSpace> spaces;
  for (int i = 0; i < 50; ++i) {
    spaces.push_back(random_space(rng, 2 + rng.uniform_int(9)));
  }

  // Independent oracle: literal max-min double loop in both directions.
  auto oracle = [](const FiniteMetricSpace& space, const PointSet& a,
                   const PointSet& b) {
    double result = 0.0;
    for (int x : a.members()) {
      double nearest = std::numeric_limits<double>::infinity();
      for (int y : b.members()) nearest = std::min(nearest, space.dist(x, y));
      result = std::max(result, nearest);
    }
    for (int y : b.members()) {
      double nearest = std::numeric_limits<double>::infinity();
      for (int x : a.members()) nearest = std::min(nearest, space.dist(x, y));
      result = std::max(result, nearest);
    }
    return result;
  };

  for (int i = 0; i < kHausdorffPairs; ++i) {
    const auto& space = spaces[rng.uniform_int(50)];
    const PointSet a = random_point_set(rng, space.size());
    const PointSet b = random_point_set(rng, space.size());
    const double h = hausdorff_distance(space, a, b);
    const double expect = oracle(space, a, b);
    if (h != expect) {
      std::ostringstream os;
      os << "pair " << i << ": got " << h << " oracle " << expect;
      log.fail(os.str());
    }
  }

  for (int i = 0; i < kHausdorffTriples; ++i) {
    const auto& space = spaces[rng.uniform_int(50)];
    const PointSet a = random_point_set(rng, space.size());
    const PointSet b = random_point_set(rng, space.size());
    const PointSet c = random_point_set(rng, space.size());
    const double ab = hausdorff_distance(space, a, b);
    const double ba = hausdorff_distance(space, b, a);
    if (ab != ba) {
      std::ostringstream os;
      os << "triple " << i << ": asymmetry " << ab << " vs " << ba;
      log.fail(os.str());
    }
    const double ac = hausdorff_distance(space, a, c);
    const double bc = hausdorff_distance(space, b, c);
    if (ac > ab + bc + kCompositeTol) {
      std::ostringstream os;
      os << "triple " << i << ": triangle excess " << ac - (ab + bc);
      log.fail(os.str());
    }
  }

  std::ostringstream os;
  os << "pairs=" << kHausdorffPairs << " triples=" << kHausdorffTriples;
  return log.finish(os.str());
}

SelftestCheck check_reductions(const Sweep& sweep) {
  CheckLog log("reduction-consistency");
  long weak_pass = 0;
  long mt_pass = 0;
  for (const auto& entry : sweep.certified) {
    const auto& space = sweep.spaces[entry.space_idx];
    const double remainder = 1.0 - entry.alpha;

    const Gauge weak_theta = Gauge::from_function(
        GaugeKind::WeakTheta, "remainder",
        [remainder](double t) { return remainder * t; });
    const Certificate weak_cert =
        certify_map(space, entry.map, ConditionKind::Weak, weak_theta);
    if (weak_cert.pass) {
      ++weak_pass;
      const Certificate eta_cert = certify_map(
          space, entry.map, ConditionKind::Eta, weak_to_gauge(weak_theta));
      if (!eta_cert.pass) {
        std::ostringstream os;
        os << "weak certificate passed but its reduction failed";
        if (eta_cert.witness) {
          os << " at " << pair_text(space, *eta_cert.witness);
        }
        log.fail(os.str());
      }
    }

    const Gauge mt = Gauge::mt_constant(entry.alpha);
    const Certificate mt_cert = certify_map(
        space, entry.map, ConditionKind::MizoguchiTakahashi, mt);
    if (mt_cert.pass) {
      ++mt_pass;
      const Certificate eta_cert =
          certify_map(space, entry.map, ConditionKind::Eta, mt_to_gauge(mt));
      if (!eta_cert.pass) {
        std::ostringstream os;
        os << "mizoguchi-takahashi certificate passed but its reduction "
              "failed";
        if (eta_cert.witness) {
          os << " at " << pair_text(space, *eta_cert.witness);
        }
        log.fail(os.str());
      }
    }
  }
  if (weak_pass == 0) log.fail("weak implication was vacuous");
  if (mt_pass == 0) log.fail("mizoguchi-takahashi implication was vacuous");
  std::ostringstream os;
  os << "weak_certified=" << weak_pass << " mt_certified=" << mt_pass;
  return log.finish(os.str());
}

SelftestCheck check_meir_keeler(const Sweep& sweep) {
  CheckLog log("meir-keeler-delta");
  long levels = 0;
  for (const auto& entry : sweep.certified) {
    const auto& space = sweep.spaces[entry.space_idx];
    const Certificate cert = certify_meir_keeler(space, entry.map);
    if (!cert.pass) {
      std::ostringstream os;
      os << "windowed certificate failed on a contraction (alpha "
         << entry.alpha << ")";
      if (cert.witness) os << " at " << pair_text(space, *cert.witness);
      log.fail(os.str());
      continue;
    }
    for (const auto& level : cert.levels) {
      ++levels;
      if (!(entry.alpha * (level.level + level.delta) < level.level)) {
        std::ostringstream os;
        os << "recorded delta " << level.delta << " at epsilon "
           << level.level << " breaks the modulus bound (alpha "
           << entry.alpha << ")";
        log.fail(os.str());
      }
    }
  }
  if (levels == 0) log.fail("no windows were recorded");
  std::ostringstream os;
  os << "maps=" << sweep.certified.size() << " windows=" << levels;
  return log.finish(os.str());
}

SelftestCheck check_bellman(std::uint64_t seed) {
  CheckLog log("bellman-convergence");

  const BellmanProblem unit({"s0"}, {"a0"}, {{1.0}}, {{0}},
                            Aggregator::affine(0.0, 0.5));
  const BellmanSolution closed =
      solve_bellman(unit, ValueFunction{0.0}, 1e-10, 200);
  if (!closed.trace.converged ||
      std::fabs(closed.value[0] - 2.0) > 1e-10) {
    std::ostringstream os;
    os << "closed-form problem solved to " << closed.value[0]
       << " (expected 2)";
    log.fail(os.str());
  }

  Rng rng(seed);
  long delta_checks = 0;
  for (int i = 0; i < kBellmanProblems; ++i) {
    const BellmanProblem problem = random_bellman_problem(rng, 20, 20, 0.9);
    const BellmanCertificate cert = certify_bellman(problem, 50, rng.raw());
    if (!cert.banach_beta.pass) {
      std::ostringstream os;
      os << "problem " << i << ": lipschitz certificate failed at beta "
         << cert.beta;
      log.fail(os.str());
      continue;
    }
    const ValueFunction h0(problem.state_count(), 0.0);
    const BellmanSolution sol = solve_bellman(problem, h0, 1e-9, 4000);
    if (!sol.trace.converged) {
      std::ostringstream os;
      os << "problem " << i << " did not converge in 4000 iterations";
      log.fail(os.str());
      continue;
    }
    const auto& deltas = sol.trace.deltas;
    for (std::size_t n = 0; n + 1 < deltas.size(); ++n) {
      ++delta_checks;
      if (deltas[n + 1] > cert.beta * deltas[n] + kCompositeTol) {
        std::ostringstream os;
        os << "problem " << i << ": delta ratio " << deltas[n + 1] / deltas[n]
           << " above beta " << cert.beta;
        log.fail(os.str());
      }
    }
    if (sol.trace.residual > 1e-8) {
      std::ostringstream os;
      os << "problem " << i << ": residual " << sol.trace.residual;
      log.fail(os.str());
    }
  }
  std::ostringstream os;
  os << "problems=" << kBellmanProblems << " delta_checks=" << delta_checks;
  return log.finish(os.str());
}

SelftestCheck check_strict_rho(std::uint64_t seed) {
  CheckLog log("strict-rho-degeneracy");
  const BellmanProblem problem({"s0"}, {"a0"}, {{1.0}}, {{0}},
                               Aggregator::affine(0.0, 0.5));
  const BellmanCertificate cert = certify_bellman(problem, 100, seed);

  if (cert.strict_rho.pass) {
    log.fail("strict modulus check passed on a sloped aggregator");
  }
  if (!cert.strict_rho.witness) {
    log.fail("no witness attached to the failed check");
  } else {
    const auto& w = *cert.strict_rho.witness;
    const auto& agg = problem.aggregator();
    const double lhs =
        std::fabs(agg.eval(w.x, w.y, w.h_at_x) - agg.eval(w.x, w.y, w.k_at_x));
    const double rhs = Gauge::rho().eval(w.d_hk);
    if (lhs != w.lhs || rhs != w.rhs || !(lhs > rhs)) {
      std::ostringstream os;
      os << "witness does not reproduce: lhs " << lhs << " vs " << w.lhs
         << ", rhs " << rhs << " vs " << w.rhs;
      log.fail(os.str());
    }
  }
  if (!cert.banach_beta.pass || cert.beta != 0.5) {
    log.fail("lipschitz route did not certify beta 0.5");
  }
  if (cert.strict_rho.name == cert.banach_beta.name) {
    log.fail("the two conditions are not distinguished in the report");
  }
  std::ostringstream os;
  os << "beta=" << cert.beta << " samples=" << cert.samples;
  return log.finish(os.str());
}

}  // namespace

SelftestReport run_selftest(std::uint64_t seed) {
  SelftestReport report;
  report.seed = seed;

  CheckLog sweep_log("banach-oracle");
  const Sweep sweep = build_sweep(seed, sweep_log);

  report.checks.push_back(check_banach_oracle(sweep, sweep_log));
  report.checks.push_back(check_caristi_descent(sweep));
  report.checks.push_back(check_telescoping(sweep, seed + 1));
  report.checks.push_back(check_hausdorff_oracle(seed + 2));
  report.checks.push_back(check_reductions(sweep));
  report.checks.push_back(check_meir_keeler(sweep));
  report.checks.push_back(check_bellman(seed + 3));
  report.checks.push_back(check_strict_rho(seed + 4));
  return report;
}

}  // namespace cfp
