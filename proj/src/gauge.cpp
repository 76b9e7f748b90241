#include "cfp/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cfp/metric.hpp"

namespace cfp {

namespace {

// Semicontinuity probes: sample at t -/+ kProbeStep and allow kProbeSlack.
// Continuous gauges with slope up to ~10 pass; point jumps are flagged.
constexpr double kProbeStep = 1e-10;
constexpr double kProbeSlack = 1e-9;

std::string format_double(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

double interpolate(const std::vector<GaugePoint>& pts, double t) {
  if (pts.size() == 1) {
    return std::max(0.0, pts.front().value);
  }
  // Locate the segment; end segments extend linearly.
  std::size_t hi = 1;
  while (hi + 1 < pts.size() && t > pts[hi].t) {
    ++hi;
  }
  const GaugePoint& a = pts[hi - 1];
  const GaugePoint& b = pts[hi];
  const double slope = (b.value - a.value) / (b.t - a.t);
  return std::max(0.0, a.value + slope * (t - a.t));
}

}  // namespace

const char* to_string(GaugeKind kind) {
  switch (kind) {
    case GaugeKind::Banach:
      return "banach";
    case GaugeKind::EtaContraction:
      return "eta-contraction";
    case GaugeKind::WeakTheta:
      return "weak-theta";
    case GaugeKind::MizoguchiTakahashi:
      return "mizoguchi-takahashi";
    case GaugeKind::Rho:
      return "rho";
    case GaugeKind::Tabulated:
      return "tabulated";
  }
  return "unknown";
}

std::optional<GaugeKind> gauge_kind_from_string(std::string_view s) {
  if (s == "banach") return GaugeKind::Banach;
  if (s == "eta-contraction") return GaugeKind::EtaContraction;
  if (s == "weak-theta") return GaugeKind::WeakTheta;
  if (s == "mizoguchi-takahashi") return GaugeKind::MizoguchiTakahashi;
  if (s == "rho") return GaugeKind::Rho;
  if (s == "tabulated") return GaugeKind::Tabulated;
  return std::nullopt;
}

Gauge Gauge::banach(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("Gauge::banach: alpha must be in [0, 1)");
  }
  Gauge g(GaugeKind::Banach, "banach(" + format_double(alpha) + ")",
          [alpha](double t) { return alpha * t; });
  g.banach_alpha_ = alpha;
  return g;
}

Gauge Gauge::rho() {
  return Gauge(GaugeKind::Rho, "rho", [](double t) {
    if (t <= 0.0) return 0.0;
    if (t < 1.0) return 0.5 * t * t;
    return 0.5 * t;
  });
}

Gauge Gauge::mt_constant(double c) {
  if (!(c >= 0.0 && c < 1.0)) {
    throw std::invalid_argument("Gauge::mt_constant: value must be in [0, 1)");
  }
  Gauge g(GaugeKind::MizoguchiTakahashi, "mt(" + format_double(c) + ")",
          [c](double) { return c; });
  g.mt_value_ = c;
  return g;
}

Gauge Gauge::tabulated(GaugeKind declared, std::vector<GaugePoint> points) {
  if (points.empty()) {
    throw std::invalid_argument("Gauge::tabulated: empty table");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].t) || !std::isfinite(points[i].value)) {
      throw std::invalid_argument("Gauge::tabulated: non-finite entry");
    }
    if (points[i].t < 0.0 || points[i].value < 0.0) {
      throw std::invalid_argument("Gauge::tabulated: negative entry");
    }
    if (i > 0 && points[i].t <= points[i - 1].t) {
      throw std::invalid_argument(
          "Gauge::tabulated: abscissas must be strictly increasing");
    }
  }
  auto name = std::string(to_string(declared)) + "-table[" +
              std::to_string(points.size()) + "]";
  return Gauge(declared, std::move(name),
               [pts = std::move(points)](double t) { return interpolate(pts, t); });
}

Gauge Gauge::from_function(GaugeKind declared, std::string name,
                           std::function<double(double)> fn) {
  if (!fn) {
    throw std::invalid_argument("Gauge::from_function: empty callable");
  }
  return Gauge(declared, std::move(name), std::move(fn));
}

bool GaugeReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const GaugeCheck& c) { return c.pass; });
}

const GaugeCheck* GaugeReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.pass) return &c;
  }
  return nullptr;
}

namespace {

void require_grid(const std::vector<double>& grid) {
  if (grid.empty()) {
    throw std::invalid_argument("check_gauge_properties: empty grid");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
      throw std::invalid_argument(
          "check_gauge_properties: grid values must be positive and finite");
    }
    if (i > 0 && grid[i] <= grid[i - 1]) {
      throw std::invalid_argument(
          "check_gauge_properties: grid must be strictly increasing");
    }
  }
}

// Each helper appends exactly one GaugeCheck covering the whole grid and
// stops at the first offending point.
void check_pointwise(GaugeReport& report, const Gauge& g,
                     const std::vector<double>& grid, const char* property,
                     const std::function<bool(double, double&, double&)>& ok) {
  GaugeCheck c{property, true, 0.0, 0.0, 0.0};
  for (double t : grid) {
    double lhs = 0.0, rhs = 0.0;
    if (!ok(t, lhs, rhs)) {
      c = {property, false, t, lhs, rhs};
      break;
    }
  }
  (void)g;
  report.checks.push_back(std::move(c));
}

void check_nonnegative(GaugeReport& r, const Gauge& g,
                       const std::vector<double>& grid) {
  check_pointwise(r, g, grid, "nonnegative",
                  [&](double t, double& lhs, double& rhs) {
                    lhs = g.eval(t);
                    rhs = 0.0;
                    return lhs >= 0.0;
                  });
}

void check_below_identity(GaugeReport& r, const Gauge& g,
                          const std::vector<double>& grid) {
  check_pointwise(r, g, grid, "below-identity",
                  [&](double t, double& lhs, double& rhs) {
                    lhs = g.eval(t);
                    rhs = t;
                    return lhs < t;
                  });
}

void check_positive(GaugeReport& r, const Gauge& g,
                    const std::vector<double>& grid) {
  check_pointwise(r, g, grid, "positive",
                  [&](double t, double& lhs, double& rhs) {
                    lhs = g.eval(t);
                    rhs = 0.0;
                    return lhs > 0.0;
                  });
}

void check_below_one(GaugeReport& r, const Gauge& g,
                     const std::vector<double>& grid) {
  check_pointwise(r, g, grid, "below-one",
                  [&](double t, double& lhs, double& rhs) {
                    lhs = g.eval(t);
                    rhs = 1.0;
                    return lhs >= 0.0 && lhs < 1.0;
                  });
}

void check_ratio_monotone(GaugeReport& r, const Gauge& g,
                          const std::vector<double>& grid, bool decreasing) {
  const char* property =
      decreasing ? "ratio-non-increasing" : "ratio-non-decreasing";
  GaugeCheck c{property, true, 0.0, 0.0, 0.0};
  double prev = g.eval(grid.front()) / grid.front();
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur = g.eval(grid[i]) / grid[i];
    const bool ok = decreasing ? cur <= prev + kCompositeTol
                               : cur + kCompositeTol >= prev;
    if (!ok) {
      c = {property, false, grid[i], cur, prev};
      break;
    }
    prev = cur;
  }
  r.checks.push_back(std::move(c));
}

void check_value_non_decreasing(GaugeReport& r, const Gauge& g,
                                const std::vector<double>& grid) {
  GaugeCheck c{"non-decreasing", true, 0.0, 0.0, 0.0};
  double prev = g.eval(grid.front());
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur = g.eval(grid[i]);
    if (cur + kCompositeTol < prev) {
      c = {"non-decreasing", false, grid[i], cur, prev};
      break;
    }
    prev = cur;
  }
  r.checks.push_back(std::move(c));
}

void check_lsc(GaugeReport& r, const Gauge& g,
               const std::vector<double>& grid) {
  check_pointwise(r, g, grid, "lower-semicontinuous",
                  [&](double t, double& lhs, double& rhs) {
                    lhs = g.eval(t);
                    double nearby = g.eval(t + kProbeStep);
                    if (t - kProbeStep > 0.0) {
                      nearby = std::min(nearby, g.eval(t - kProbeStep));
                    }
                    rhs = nearby;
                    return lhs <= nearby + kProbeSlack;
                  });
}

void check_rho_form(GaugeReport& r, const Gauge& g,
                    const std::vector<double>& grid) {
  check_pointwise(r, g, grid, "matches-piecewise-form",
                  [&](double t, double& lhs, double& rhs) {
                    lhs = g.eval(t);
                    rhs = t < 1.0 ? 0.5 * t * t : 0.5 * t;
                    return lhs == rhs;
                  });
}

void check_eta_class(GaugeReport& r, const Gauge& g,
                     const std::vector<double>& grid) {
  check_nonnegative(r, g, grid);
  check_below_identity(r, g, grid);
  check_ratio_monotone(r, g, grid, /*decreasing=*/false);
  check_lsc(r, g, grid);
}

}  // namespace

GaugeReport check_gauge_properties(const Gauge& gauge,
                                   const std::vector<double>& grid) {
  require_grid(grid);
  GaugeReport report;
  switch (gauge.kind()) {
    case GaugeKind::Banach:
    case GaugeKind::EtaContraction:
      check_eta_class(report, gauge, grid);
      break;
    case GaugeKind::Rho:
      check_rho_form(report, gauge, grid);
      check_eta_class(report, gauge, grid);
      break;
    case GaugeKind::WeakTheta:
      check_positive(report, gauge, grid);
      check_ratio_monotone(report, gauge, grid, /*decreasing=*/true);
      check_lsc(report, gauge, grid);
      break;
    case GaugeKind::MizoguchiTakahashi:
      check_below_one(report, gauge, grid);
      check_value_non_decreasing(report, gauge, grid);
      break;
    case GaugeKind::Tabulated:
      check_nonnegative(report, gauge, grid);
      check_lsc(report, gauge, grid);
      break;
  }
  return report;
}

namespace {

void require_all_pass(const GaugeReport& report, const char* who,
                      const Gauge& g) {
  if (const GaugeCheck* f = report.first_failure()) {
    std::ostringstream os;
    os << who << ": gauge '" << g.name() << "' failed property '"
       << f->property << "' at t = " << f->t;
    throw GaugeError(os.str());
  }
}

}  // namespace

Gauge midpoint_gauge(const Gauge& eta) {
  if (auto alpha = eta.banach_alpha()) {
    return Gauge::banach(0.5 * (1.0 + *alpha));
  }
  return Gauge::from_function(
      GaugeKind::EtaContraction, "midpoint(" + eta.name() + ")",
      [eta](double t) { return 0.5 * (eta.eval(t) + t); });
}

Gauge midpoint_gauge(const Gauge& eta, const std::vector<double>& grid) {
  GaugeReport report = eta.kind() == GaugeKind::EtaContraction ||
                               eta.kind() == GaugeKind::Banach ||
                               eta.kind() == GaugeKind::Rho
                           ? check_gauge_properties(eta, grid)
                           : check_gauge_properties(
                                 Gauge::from_function(
                                     GaugeKind::EtaContraction, eta.name(),
                                     [eta](double t) { return eta.eval(t); }),
                                 grid);
  require_all_pass(report, "midpoint_gauge", eta);
  return midpoint_gauge(eta);
}

Gauge weak_to_gauge(const Gauge& theta) {
  if (auto alpha = theta.banach_alpha()) {
    return Gauge::banach(1.0 - *alpha);
  }
  return Gauge::from_function(
      GaugeKind::EtaContraction, "weak-reduced(" + theta.name() + ")",
      [theta](double t) { return t - theta.eval(t); });
}

Gauge weak_to_gauge(const Gauge& theta, const std::vector<double>& grid) {
  GaugeReport report = check_gauge_properties(
      theta.kind() == GaugeKind::WeakTheta
          ? theta
          : Gauge::from_function(GaugeKind::WeakTheta, theta.name(),
                                 [theta](double t) { return theta.eval(t); }),
      grid);
  require_all_pass(report, "weak_to_gauge", theta);
  for (double t : grid) {
    const double v = theta.eval(t);
    if (v > t) {
      std::ostringstream os;
      os << "weak_to_gauge: theta(" << t << ") = " << v
         << " exceeds t; reduced gauge would be negative";
      throw GaugeError(os.str());
    }
  }
  return weak_to_gauge(theta);
}

Gauge mt_to_gauge(const Gauge& eta_mt) {
  if (auto c = eta_mt.mt_value()) {
    return Gauge::banach(*c);
  }
  return Gauge::from_function(
      GaugeKind::EtaContraction, "mt-reduced(" + eta_mt.name() + ")",
      [eta_mt](double t) { return eta_mt.eval(t) * t; });
}

Gauge mt_to_gauge(const Gauge& eta_mt, const std::vector<double>& grid) {
  GaugeReport report = check_gauge_properties(
      eta_mt.kind() == GaugeKind::MizoguchiTakahashi
          ? eta_mt
          : Gauge::from_function(GaugeKind::MizoguchiTakahashi, eta_mt.name(),
                                 [eta_mt](double t) { return eta_mt.eval(t); }),
      grid);
  require_all_pass(report, "mt_to_gauge", eta_mt);
  return mt_to_gauge(eta_mt);
}

double caristi_potential(const Gauge& theta, double d) {
  if (d < 0.0 || !std::isfinite(d)) {
    throw std::invalid_argument("caristi_potential: distance must be finite and >= 0");
  }
  if (d == 0.0) {
    return 0.0;
  }
  const double m = theta.eval(d);
  if (m >= d) {
    std::ostringstream os;
    os << "caristi_potential: theta(" << d << ") = " << m
       << " is not below the distance; potential undefined";
    throw PotentialUndefinedError(os.str());
  }
  return d * d / (d - m);
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi >= lo) || points < 1) {
    throw std::invalid_argument("log_grid: need 0 < lo <= hi and points >= 1");
  }
  if (lo == hi || points == 1) {
    return {lo};
  }
  std::vector<double> out(points);
  const double ratio = hi / lo;
  for (int i = 0; i < points; ++i) {
    out[i] = lo * std::pow(ratio, static_cast<double>(i) / (points - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace cfp
