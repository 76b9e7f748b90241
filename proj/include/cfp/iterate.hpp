#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfp/certify.hpp"
#include "cfp/gauge.hpp"
#include "cfp/metric.hpp"

namespace cfp {

/// Raised by multivalued_orbit when the selected successor violates the
/// certified step bound d(y, z) <= theta(d(x, y)).
class SelectionBoundError : public std::runtime_error {
 public:
  SelectionBoundError(std::string message, int step, int from, int via, int to)
      : std::runtime_error(std::move(message)),
        step(step),
        from(from),
        via(via),
        to(to) {}

  int step;  // index of the violating step
  int from;  // x of the bounding edge (x, y)
  int via;   // y of the bounding edge
  int to;    // selected z
};

enum class Termination {
  FixedPoint,  // orbit reached a fixed point
  MaxIter,     // step budget exhausted
  Stalled      // deterministic cycle detected (a state or edge repeated)
};

const char* to_string(Termination t);

struct StopRule {
  int max_iter = 1000;

  /// A map passing the caristi certificate reaches a fixed point within
  /// space_size - 1 moves, so the step budget is clamped to space_size.
  static StopRule for_certified(int space_size) { return {space_size}; }
};

struct IterationTrace {
  std::vector<int> points;
  std::vector<double> step_dist;  // step_dist[i] = d(points[i], points[i+1])
  std::vector<double> potential;  // potential[i] at step i; empty when no
                                  // gauge was supplied or a value was
                                  // undefined along the trace
  Termination termination = Termination::MaxIter;
  int relaxed_steps = 0;  // set-valued steps that hit the bound with equality

  /// Index of the first visit to the terminal fixed point; meaningful only
  /// when termination == FixedPoint.
  int steps_to_fixed_point() const;
};

/// Picard orbit x, Tx, T^2 x, ... recorded until T fixes the current point
/// (the confirming duplicate is kept in the trace), a state repeats, or the
/// step budget runs out.  When a contraction gauge eta is supplied, step
/// potentials caristi_potential(midpoint_gauge(eta), step_dist[i]) are
/// recorded; if theta(d) >= d at some step the potential column is dropped.
IterationTrace picard_iterate(const FiniteMetricSpace& space,
                              const SingleValuedMap& map, int x0,
                              const StopRule& stop,
                              const Gauge* eta = nullptr);

/// Orbit x0, x1, ... with x_{n+1} chosen from T(x_n) by minimum distance to
/// x_n (ties broken by lowest index).  Membership x_n in T(x_n) terminates
/// before selection.  Each selected step must satisfy
/// d(x_n, x_{n+1}) <= theta(d(x_{n-1}, x_n)); equality is accepted and
/// counted in relaxed_steps, a larger step raises SelectionBoundError.
/// Step potentials use caristi_potential(theta, step_dist[i]).
IterationTrace multivalued_orbit(const FiniteMetricSpace& space,
                                 const MultiValuedMap& map, int x0,
                                 const Gauge& theta, const StopRule& stop);

/// potential[n] - potential[m], an upper bound for d(points[n], points[m])
/// on certified traces (within kCompositeTol scale noise; the acceptance
/// checks use 1e-9).  Requires 0 <= n <= m < potential.size(); throws
/// std::invalid_argument on traces without potentials.
double telescoping_bound(const IterationTrace& trace, int n, int m);

struct TelescopingAudit {
  int pairs = 0;
  double max_excess = 0.0;  // worst d(x_n, x_m) - bound over audited pairs
  bool pass = true;         // max_excess <= tol
};

/// Checks d(points[n], points[m]) <= potential[n] - potential[m] + tol for
/// every n <= m.  On fixed-point traces the terminal point gets potential 0
/// (a fixed point can repeat forever at zero step distance), so the audit
/// covers the whole orbit.  Throws std::invalid_argument on traces without
/// potentials.
TelescopingAudit audit_telescoping(const FiniteMetricSpace& space,
                                   const IterationTrace& trace, double tol);

/// Indices of all fixed points: image[i] == i, or i in images[i] for set
/// valued maps.  May be empty.
std::vector<int> brute_force_fixed_points(const FiniteMetricSpace& space,
                                          const SingleValuedMap& map);
std::vector<int> brute_force_fixed_points(const FiniteMetricSpace& space,
                                          const MultiValuedMap& map);

}  // namespace cfp
