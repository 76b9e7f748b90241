#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cfp {

/// Raised when a gauge transform precondition fails (strict mode) or a
/// reduction would produce an invalid gauge.
class GaugeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by caristi_potential when theta(d) >= d, where the potential
/// formula has no value.
class PotentialUndefinedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class GaugeKind {
  Banach,              // alpha * t with 0 <= alpha < 1
  EtaContraction,      // eval(t) < t, eval(t)/t non-decreasing, lsc
  WeakTheta,           // eval(t) > 0, eval(t)/t non-increasing, lsc
  MizoguchiTakahashi,  // 0 <= eval(t) < 1, non-decreasing
  Rho,                 // t^2/2 below 1, t/2 from 1 on
  Tabulated            // class-agnostic sampled curve
};

const char* to_string(GaugeKind kind);
std::optional<GaugeKind> gauge_kind_from_string(std::string_view s);

/// One sample of a tabulated gauge.  Abscissas must be nonnegative and
/// strictly increasing.
struct GaugePoint {
  double t = 0.0;
  double value = 0.0;
};

/// A comparison function on distances.  The declared kind states which
/// property set the gauge claims to satisfy; the properties themselves are
/// checked on finite grids by check_gauge_properties and the certifiers.
/// Gauges are immutable values; eval is pure.
class Gauge {
 public:
  /// alpha * t.  Requires 0 <= alpha < 1.
  static Gauge banach(double alpha);

  /// t^2/2 for 0 < t < 1, t/2 for t >= 1, 0 at 0.
  static Gauge rho();

  /// Constant Mizoguchi-Takahashi ratio.  Requires 0 <= c < 1.
  static Gauge mt_constant(double c);

  /// Piecewise-linear interpolation of the samples; the end segments are
  /// extended linearly and results are floored at 0.  A single sample gives
  /// a constant gauge.  Throws std::invalid_argument for unsorted or
  /// negative tables.
  static Gauge tabulated(GaugeKind declared, std::vector<GaugePoint> points);

  /// Wraps an arbitrary callable under a declared kind.  Used by the gauge
  /// transforms and by tests with closed-form curves.
  static Gauge from_function(GaugeKind declared, std::string name,
                             std::function<double(double)> fn);

  GaugeKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double eval(double t) const { return fn_(t); }

  /// Set when eval is exactly alpha * t (Banach factory or a transform that
  /// preserves the closed form).
  std::optional<double> banach_alpha() const { return banach_alpha_; }
  /// Set for constant Mizoguchi-Takahashi gauges.
  std::optional<double> mt_value() const { return mt_value_; }

 private:
  Gauge(GaugeKind kind, std::string name, std::function<double(double)> fn)
      : kind_(kind), name_(std::move(name)), fn_(std::move(fn)) {}

  GaugeKind kind_;
  std::string name_;
  std::function<double(double)> fn_;
  std::optional<double> banach_alpha_;
  std::optional<double> mt_value_;
};

/// Result of one grid property check.  On failure, t is the offending
/// abscissa and lhs/rhs the two sides of the violated comparison.
struct GaugeCheck {
  std::string property;
  bool pass = true;
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct GaugeReport {
  std::vector<GaugeCheck> checks;

  bool all_pass() const;
  const GaugeCheck* first_failure() const;
};

/// Checks the declared kind's properties at every grid point.  Strict
/// pointwise bounds (eval(t) < t, eval(t) < 1, ...) are compared exactly;
/// monotonicity comparisons between two evaluations get kCompositeTol slack.
/// Semicontinuity is probed by sampling at t -/+ 1e-10 with slack 1e-9,
/// which accepts continuous gauges of moderate slope and flags point jumps.
/// The grid must be nonempty, strictly increasing and positive.
GaugeReport check_gauge_properties(const Gauge& gauge,
                                   const std::vector<double>& grid);

/// theta(t) = (eta(t) + t) / 2.  Maps banach(a) to banach((1+a)/2) exactly.
Gauge midpoint_gauge(const Gauge& eta);
/// Strict form: first certifies eta as an eta-contraction on the grid and
/// throws GaugeError when any property fails.
Gauge midpoint_gauge(const Gauge& eta, const std::vector<double>& grid);

/// eta(t) = t - theta(t).  Maps banach(a) to banach(1-a) exactly.
Gauge weak_to_gauge(const Gauge& theta);
/// Strict form: certifies theta as a weak-theta gauge on the grid and also
/// rejects grids where theta(t) > t (the reduction would go negative).
Gauge weak_to_gauge(const Gauge& theta, const std::vector<double>& grid);

/// theta(t) = eta_mt(t) * t.  Maps a constant ratio c to banach(c) exactly.
Gauge mt_to_gauge(const Gauge& eta_mt);
/// Strict form: certifies eta_mt on the grid and rejects values >= 1.
Gauge mt_to_gauge(const Gauge& eta_mt, const std::vector<double>& grid);

/// d / (1 - theta(d)/d), computed as d*d / (d - theta(d)); 0 at d = 0.
/// Throws PotentialUndefinedError when theta(d) >= d for d > 0.  The result
/// is >= d, strictly when theta(d) > 0.
double caristi_potential(const Gauge& theta, double d);

/// points log-spaced abscissas from lo to hi inclusive (lo == hi collapses
/// to a single point).  Requires 0 < lo <= hi.
std::vector<double> log_grid(double lo, double hi, int points);

}  // namespace cfp
