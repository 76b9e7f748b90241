#include "cfp/iterate.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <utility>

namespace cfp {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::FixedPoint:
      return "fixed-point";
    case Termination::MaxIter:
      return "max-iter";
    case Termination::Stalled:
      return "stalled";
  }
  return "unknown";
}

int IterationTrace::steps_to_fixed_point() const {
  if (points.empty()) return -1;
  const int terminal = points.back();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] == terminal) return static_cast<int>(i);
  }
  return -1;
}

namespace {

void require_start(const FiniteMetricSpace& space, int x0, const char* who) {
  if (x0 < 0 || x0 >= space.size()) {
    throw std::invalid_argument(std::string(who) +
                                ": start index out of range");
  }
}

void require_stop(const StopRule& stop, const char* who) {
  if (stop.max_iter < 0) {
    throw std::invalid_argument(std::string(who) + ": negative step budget");
  }
}

// Fills trace.potential from step_dist via theta; leaves the column empty
// when the potential is undefined at some step.
void attach_potentials(IterationTrace& trace, const Gauge& theta) {
  std::vector<double> pot;
  pot.reserve(trace.step_dist.size());
  try {
    for (double d : trace.step_dist) {
      pot.push_back(caristi_potential(theta, d));
    }
  } catch (const PotentialUndefinedError&) {
    return;
  }
  trace.potential = std::move(pot);
}

}  // namespace

IterationTrace picard_iterate(const FiniteMetricSpace& space,
                              const SingleValuedMap& map, int x0,
                              const StopRule& stop, const Gauge* eta) {
  if (map.size() != space.size()) {
    throw std::invalid_argument(
        "picard_iterate: map size does not match space");
  }
  require_start(space, x0, "picard_iterate");
  require_stop(stop, "picard_iterate");

  IterationTrace trace;
  trace.points.push_back(x0);
  trace.termination = Termination::MaxIter;
  std::vector<bool> visited(space.size(), false);
  visited[x0] = true;

  int cur = x0;
  for (int step = 0; step < stop.max_iter; ++step) {
    const int next = map.apply(cur);
    trace.points.push_back(next);
    trace.step_dist.push_back(space.dist(cur, next));
    if (next == cur) {
      trace.termination = Termination::FixedPoint;
      break;
    }
    if (visited[next]) {
      trace.termination = Termination::Stalled;
      break;
    }
    visited[next] = true;
    cur = next;
  }
  if (eta != nullptr) {
    attach_potentials(trace, midpoint_gauge(*eta));
  }
  return trace;
}

IterationTrace multivalued_orbit(const FiniteMetricSpace& space,
                                 const MultiValuedMap& map, int x0,
                                 const Gauge& theta, const StopRule& stop) {
  if (map.size() != space.size()) {
    throw std::invalid_argument(
        "multivalued_orbit: map size does not match space");
  }
  require_start(space, x0, "multivalued_orbit");
  require_stop(stop, "multivalued_orbit");

  IterationTrace trace;
  trace.points.push_back(x0);
  trace.termination = Termination::MaxIter;
  std::set<std::pair<int, int>> seen_edges;

  int cur = x0;
  std::optional<double> prev_step;  // d(x_{n-1}, x_n) bounds the next step
  for (int step = 0;; ++step) {
    // Membership test comes before selection: x in T(x) is a fixed point.
    if (map.apply(cur).contains(cur)) {
      trace.termination = Termination::FixedPoint;
      break;
    }
    if (step >= stop.max_iter) {
      trace.termination = Termination::MaxIter;
      break;
    }
    // Deterministic selection: minimum distance, then lowest index.
    const auto& image = map.apply(cur).members();
    int next = image.front();
    double best = space.dist(cur, next);
    for (std::size_t m = 1; m < image.size(); ++m) {
      const double d = space.dist(cur, image[m]);
      if (d < best) {
        best = d;
        next = image[m];
      }
    }
    if (prev_step) {
      const double bound = theta.eval(*prev_step);
      if (best > bound) {
        const int prev = trace.points[trace.points.size() - 2];
        std::ostringstream os;
        os << "multivalued_orbit: selected step " << step << " ("
           << space.label(cur) << " -> " << space.label(next) << ") has d = "
           << best << " above the certified bound theta = " << bound;
        throw SelectionBoundError(os.str(), step, prev, cur, next);
      }
      if (best == bound) {
        ++trace.relaxed_steps;
      }
    }
    if (!seen_edges.insert({cur, next}).second) {
      trace.termination = Termination::Stalled;
      break;
    }
    trace.points.push_back(next);
    trace.step_dist.push_back(best);
    prev_step = best;
    cur = next;
  }
  attach_potentials(trace, theta);
  return trace;
}

double telescoping_bound(const IterationTrace& trace, int n, int m) {
  if (trace.potential.empty()) {
    throw std::invalid_argument(
        "telescoping_bound: trace carries no potentials");
  }
  if (n < 0 || m < n || m >= static_cast<int>(trace.potential.size())) {
    throw std::invalid_argument("telescoping_bound: indices out of range");
  }
  return trace.potential[n] - trace.potential[m];
}

TelescopingAudit audit_telescoping(const FiniteMetricSpace& space,
                                   const IterationTrace& trace, double tol) {
  if (trace.potential.empty() && trace.points.size() > 1) {
    throw std::invalid_argument(
        "audit_telescoping: trace carries no potentials");
  }
  // Potentials exist per step; the terminal point of a fixed-point trace
  // extends the column with 0.
  const std::size_t steps = trace.potential.size();
  std::size_t covered = steps;
  if (trace.termination == Termination::FixedPoint &&
      trace.points.size() > steps) {
    covered = steps + 1;
  }
  auto pot = [&](std::size_t i) {
    return i < steps ? trace.potential[i] : 0.0;
  };

  TelescopingAudit audit;
  for (std::size_t n = 0; n < covered; ++n) {
    for (std::size_t m = n; m < covered; ++m) {
      const double d = space.dist(trace.points[n], trace.points[m]);
      const double excess = d - (pot(n) - pot(m));
      audit.max_excess = std::max(audit.max_excess, excess);
      ++audit.pairs;
    }
  }
  audit.pass = audit.max_excess <= tol;
  return audit;
}

std::vector<int> brute_force_fixed_points(const FiniteMetricSpace& space,
                                          const SingleValuedMap& map) {
  if (map.size() != space.size()) {
    throw std::invalid_argument(
        "brute_force_fixed_points: map size does not match space");
  }
  std::vector<int> out;
  for (int i = 0; i < space.size(); ++i) {
    if (map.apply(i) == i) out.push_back(i);
  }
  return out;
}

std::vector<int> brute_force_fixed_points(const FiniteMetricSpace& space,
                                          const MultiValuedMap& map) {
  if (map.size() != space.size()) {
    throw std::invalid_argument(
        "brute_force_fixed_points: map size does not match space");
  }
  std::vector<int> out;
  for (int i = 0; i < space.size(); ++i) {
    if (map.apply(i).contains(i)) out.push_back(i);
  }
  return out;
}

}  // namespace cfp
