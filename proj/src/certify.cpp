#include "cfp/certify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace cfp {

namespace {

using ImageDist = std::function<double(int, int)>;

constexpr double kProbeStep = 1e-10;
constexpr double kProbeSlack = 1e-9;

void validate_grid(const std::vector<double>& grid) {
  if (grid.empty()) {
    throw std::invalid_argument("certify: empty evaluation grid");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
      throw std::invalid_argument("certify: grid values must be positive");
    }
    if (i > 0 && grid[i] <= grid[i - 1]) {
      throw std::invalid_argument("certify: grid must be strictly increasing");
    }
  }
}

double tight_alpha_impl(const FiniteMetricSpace& space, const ImageDist& img) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  double alpha = 0.0;
  const int n = space.size();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = space.dist(i, j);
      const double big = img(i, j);
      if (big == 0.0) continue;
      double a = big / d;
      while (a * d < big) {
        a = std::nextafter(a, inf);
      }
      alpha = std::max(alpha, a);
    }
  }
  // The per-pair bumps make each pair pass at its own ratio; re-verify the
  // maximum against every pair and widen if a product still rounds short.
  bool ok = false;
  while (!ok) {
    ok = true;
    for (int i = 0; i < n && ok; ++i) {
      for (int j = i + 1; j < n && ok; ++j) {
        if (alpha * space.dist(i, j) < img(i, j)) {
          alpha = std::nextafter(alpha, inf);
          ok = false;
        }
      }
    }
  }
  return alpha;
}

// --- condition-specific gauge property checks -----------------------------
// The declared-kind sets live in check_gauge_properties; the conditions
// below need their own combinations.

void append_check(GaugeReport& r, std::string property, bool pass, double t,
                  double lhs, double rhs) {
  r.checks.push_back({std::move(property), pass, t, lhs, rhs});
}

void check_zero_at_zero(GaugeReport& r, const Gauge& g) {
  const double v = g.eval(0.0);
  append_check(r, "zero-at-zero", v == 0.0, 0.0, v, 0.0);
}

void check_below_identity(GaugeReport& r, const Gauge& g,
                          const std::vector<double>& grid) {
  for (double t : grid) {
    const double v = g.eval(t);
    if (!(v < t)) {
      append_check(r, "below-identity", false, t, v, t);
      return;
    }
  }
  append_check(r, "below-identity", true, 0.0, 0.0, 0.0);
}

void check_positive(GaugeReport& r, const Gauge& g,
                    const std::vector<double>& grid) {
  for (double t : grid) {
    const double v = g.eval(t);
    if (!(v > 0.0)) {
      append_check(r, "positive", false, t, v, 0.0);
      return;
    }
  }
  append_check(r, "positive", true, 0.0, 0.0, 0.0);
}

void check_ratio_non_decreasing(GaugeReport& r, const Gauge& g,
                                const std::vector<double>& grid) {
  double prev = g.eval(grid.front()) / grid.front();
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur = g.eval(grid[i]) / grid[i];
    if (cur + kCompositeTol < prev) {
      append_check(r, "ratio-non-decreasing", false, grid[i], cur, prev);
      return;
    }
    prev = cur;
  }
  append_check(r, "ratio-non-decreasing", true, 0.0, 0.0, 0.0);
}

void check_nonneg_remainder(GaugeReport& r, const Gauge& g,
                            const std::vector<double>& grid) {
  for (double t : grid) {
    const double rem = t - g.eval(t);
    if (rem < 0.0) {
      append_check(r, "nonneg-remainder", false, t, rem, 0.0);
      return;
    }
  }
  append_check(r, "nonneg-remainder", true, 0.0, 0.0, 0.0);
}

void check_right_usc(GaugeReport& r, const Gauge& g,
                     const std::vector<double>& grid) {
  for (double t : grid) {
    const double here = g.eval(t);
    const double right = g.eval(t + kProbeStep);
    if (right > here + kProbeSlack) {
      append_check(r, "right-upper-semicontinuous", false, t, right, here);
      return;
    }
  }
  append_check(r, "right-upper-semicontinuous", true, 0.0, 0.0, 0.0);
}

GaugeReport condition_gauge_report(ConditionKind kind, const Gauge& g,
                                   const std::vector<double>& grid) {
  switch (kind) {
    case ConditionKind::Banach:
    case ConditionKind::Eta:
    case ConditionKind::MizoguchiTakahashi:
    case ConditionKind::Weak:
      return check_gauge_properties(g, grid);
    case ConditionKind::Rhoades: {
      GaugeReport r;
      check_positive(r, g, grid);
      check_ratio_non_decreasing(r, g, grid);
      check_nonneg_remainder(r, g, grid);
      return r;
    }
    case ConditionKind::BoydWong: {
      GaugeReport r;
      check_zero_at_zero(r, g);
      check_below_identity(r, g, grid);
      check_right_usc(r, g, grid);
      return r;
    }
    case ConditionKind::LFunction: {
      GaugeReport r;
      check_zero_at_zero(r, g);
      return r;  // level checks are appended by the certifier
    }
    default:
      return {};
  }
}

double condition_rhs(ConditionKind kind, const Gauge& g, double d) {
  switch (kind) {
    case ConditionKind::Banach:
    case ConditionKind::Eta:
    case ConditionKind::BoydWong:
    case ConditionKind::LFunction:
      return g.eval(d);
    case ConditionKind::MizoguchiTakahashi:
      return g.eval(d) * d;
    case ConditionKind::Rhoades:
    case ConditionKind::Weak:
      return d - g.eval(d);
    default:
      return 0.0;
  }
}

// L-function window search: largest delta with phi <= s on [s, s + delta],
// sampled at nine evenly spaced points plus every distance level inside.
bool lf_window_ok(const Gauge& g, const std::vector<double>& levels, double s,
                  double delta) {
  for (int k = 0; k <= 8; ++k) {
    const double t = s + delta * (static_cast<double>(k) / 8.0);
    if (g.eval(t) > s) return false;
  }
  for (double t : levels) {
    if (t > s && t - s <= delta && g.eval(t) > s) return false;
  }
  return true;
}

std::vector<double> descending_half_gaps(const std::vector<double>& levels) {
  std::vector<double> gaps;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    gaps.push_back(0.5 * (levels[i + 1] - levels[i]));
  }
  std::sort(gaps.begin(), gaps.end(), std::greater<double>());
  return gaps;
}

void certify_lfunction_levels(Certificate& cert, const Gauge& g,
                              const std::vector<double>& levels) {
  const auto half_gaps = descending_half_gaps(levels);
  for (double s : levels) {
    const double phi_s = g.eval(s);
    if (!(phi_s > 0.0)) {
      append_check(cert.gauge_report, "positive-at-level", false, s, phi_s,
                   0.0);
      return;
    }
    std::vector<double> candidates = half_gaps;
    double ladder = 0.5 * s;
    for (int j = 0; j < 60; ++j) {
      candidates.push_back(ladder);
      ladder *= 0.5;
    }
    bool found = false;
    for (double delta : candidates) {
      if (delta > 0.0 && lf_window_ok(g, levels, s, delta)) {
        cert.levels.push_back({s, delta});
        found = true;
        break;
      }
    }
    if (!found) {
      append_check(cert.gauge_report, "window-above", false, s, g.eval(s), s);
      return;
    }
  }
  append_check(cert.gauge_report, "window-above", true, 0.0, 0.0, 0.0);
  append_check(cert.gauge_report, "positive-at-level", true, 0.0, 0.0, 0.0);
}

Certificate certify_gauge_condition(const FiniteMetricSpace& space,
                                    ConditionKind kind, const Gauge& gauge,
                                    const ImageDist& img,
                                    const CertifyOptions& opt) {
  switch (kind) {
    case ConditionKind::Caristi:
    case ConditionKind::CaristiTwoVar:
      throw std::invalid_argument(
          "certify_map: caristi conditions need a potential table, not a gauge");
    case ConditionKind::MeirKeeler:
      throw std::invalid_argument(
          "certify_map: meir-keeler is gauge-free; use certify_meir_keeler");
    case ConditionKind::RhoBellman:
      throw std::invalid_argument(
          "certify_map: rho-bellman applies to problems; use certify_bellman");
    default:
      break;
  }
  if (!condition_accepts(kind, gauge.kind())) {
    std::ostringstream os;
    os << "certify_map: condition '" << to_string(kind)
       << "' does not accept a gauge of kind '" << to_string(gauge.kind())
       << "'";
    throw std::invalid_argument(os.str());
  }

  Certificate cert;
  cert.kind = kind;
  cert.map_name = opt.map_name;
  cert.gauge_name = gauge.name();
  if (opt.grid.empty()) {
    cert.grid = default_check_grid(space);
  } else {
    validate_grid(opt.grid);
    cert.grid = opt.grid;
  }
  cert.gauge_report = condition_gauge_report(kind, gauge, cert.grid);
  if (kind == ConditionKind::LFunction && cert.gauge_report.all_pass()) {
    certify_lfunction_levels(cert, gauge, space.distance_values());
  }

  const bool strict = kind == ConditionKind::LFunction;
  const int n = space.size();
  for (int x = 0; x < n && !cert.witness; ++x) {
    for (int y = 0; y < n; ++y) {
      if (y == x) continue;
      const double d = space.dist(x, y);
      const double lhs = img(x, y);
      const double rhs = condition_rhs(kind, gauge, d);
      ++cert.pairs_checked;
      const bool ok = strict ? lhs < rhs : lhs <= rhs;
      if (!ok) {
        cert.witness = PairWitness{x, y, lhs, rhs};
        break;
      }
    }
  }
  cert.pass = cert.gauge_report.all_pass() && !cert.witness;
  return cert;
}

// Meir-Keeler window check for the candidate delta at level epsilon.  The
// window test uses the subtracted form d - epsilon < delta so the level
// itself is always inside the window.
bool mk_window_ok(const FiniteMetricSpace& space, const ImageDist& img,
                  double epsilon, double delta) {
  const int n = space.size();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = space.dist(i, j);
      if (d >= epsilon && d - epsilon < delta) {
        if (!(img(i, j) < epsilon)) return false;
      }
    }
  }
  return true;
}

Certificate certify_mk_impl(const FiniteMetricSpace& space,
                            const ImageDist& img, const CertifyOptions& opt) {
  Certificate cert;
  cert.kind = ConditionKind::MeirKeeler;
  cert.map_name = opt.map_name;

  const int n = space.size();
  for (int x = 0; x < n && !cert.witness; ++x) {
    for (int y = 0; y < n; ++y) {
      if (y == x) continue;
      const double d = space.dist(x, y);
      const double lhs = img(x, y);
      ++cert.pairs_checked;
      if (!(lhs < d)) {
        cert.witness = PairWitness{x, y, lhs, d};
        break;
      }
    }
  }
  if (cert.witness) {
    cert.pass = false;
    return cert;
  }

  const auto levels = space.distance_values();
  const auto half_gaps = descending_half_gaps(levels);
  const double rho = tight_alpha_impl(space, img);
  for (double epsilon : levels) {
    // Cap candidate deltas by the analytic window of the measured modulus:
    // pairs inside [eps, eps + cap) contract below eps because
    // rho * (eps + cap) <= eps * (1 + rho) / 2 < eps.
    double cap;
    if (rho == 0.0) {
      cap = epsilon;
    } else if (rho < 1.0) {
      cap = epsilon * (1.0 - rho) / (2.0 * rho);
    } else {
      cap = epsilon * 1e-12;
    }
    std::vector<double> candidates{cap};
    for (double g : half_gaps) {
      if (g <= cap && g > 0.0) candidates.push_back(g);
    }
    double ladder = 0.5 * cap;
    for (int j = 0; j < 60; ++j) {
      candidates.push_back(ladder);
      ladder *= 0.5;
    }
    bool found = false;
    for (double delta : candidates) {
      if (delta > 0.0 && mk_window_ok(space, img, epsilon, delta)) {
        cert.levels.push_back({epsilon, delta});
        found = true;
        break;
      }
    }
    if (!found) {
      append_check(cert.gauge_report, "window-search", false, epsilon, 0.0,
                   0.0);
      cert.pass = false;
      return cert;
    }
  }
  cert.pass = true;
  return cert;
}

void validate_point_potential(const PointPotential& phi, int n) {
  if (static_cast<int>(phi.value.size()) != n) {
    throw std::invalid_argument(
        "certify_caristi: potential size does not match space size");
  }
  for (double v : phi.value) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument(
          "certify_caristi: potential values must be finite and >= 0");
    }
  }
  if (phi.tol < 0.0) {
    throw std::invalid_argument("certify_caristi: negative tolerance");
  }
}

void validate_pair_potential(const PairPotential& phi, int n) {
  if (static_cast<int>(phi.value.size()) != n) {
    throw std::invalid_argument(
        "certify_caristi_two_var: potential size does not match space size");
  }
  for (const auto& row : phi.value) {
    if (static_cast<int>(row.size()) != n) {
      throw std::invalid_argument(
          "certify_caristi_two_var: potential table is not square");
    }
    for (double v : row) {
      if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument(
            "certify_caristi_two_var: potential values must be finite and >= 0");
      }
    }
  }
  if (phi.tol < 0.0) {
    throw std::invalid_argument("certify_caristi_two_var: negative tolerance");
  }
}

}  // namespace

const char* to_string(ConditionKind kind) {
  switch (kind) {
    case ConditionKind::Caristi:
      return "caristi";
    case ConditionKind::CaristiTwoVar:
      return "caristi-two-var";
    case ConditionKind::Banach:
      return "banach";
    case ConditionKind::Eta:
      return "eta";
    case ConditionKind::MizoguchiTakahashi:
      return "mizoguchi-takahashi";
    case ConditionKind::Rhoades:
      return "rhoades";
    case ConditionKind::Weak:
      return "weak";
    case ConditionKind::BoydWong:
      return "boyd-wong";
    case ConditionKind::MeirKeeler:
      return "meir-keeler";
    case ConditionKind::LFunction:
      return "l-function";
    case ConditionKind::RhoBellman:
      return "rho-bellman";
  }
  return "unknown";
}

std::optional<ConditionKind> condition_kind_from_string(std::string_view s) {
  if (s == "caristi") return ConditionKind::Caristi;
  if (s == "caristi-two-var") return ConditionKind::CaristiTwoVar;
  if (s == "banach") return ConditionKind::Banach;
  if (s == "eta") return ConditionKind::Eta;
  if (s == "mizoguchi-takahashi") return ConditionKind::MizoguchiTakahashi;
  if (s == "rhoades") return ConditionKind::Rhoades;
  if (s == "weak") return ConditionKind::Weak;
  if (s == "boyd-wong") return ConditionKind::BoydWong;
  if (s == "meir-keeler") return ConditionKind::MeirKeeler;
  if (s == "l-function") return ConditionKind::LFunction;
  if (s == "rho-bellman") return ConditionKind::RhoBellman;
  return std::nullopt;
}

bool condition_accepts(ConditionKind condition, GaugeKind kind) {
  switch (condition) {
    case ConditionKind::Banach:
      return kind == GaugeKind::Banach;
    case ConditionKind::Eta:
      return kind == GaugeKind::EtaContraction || kind == GaugeKind::Banach ||
             kind == GaugeKind::Rho;
    case ConditionKind::MizoguchiTakahashi:
      return kind == GaugeKind::MizoguchiTakahashi;
    case ConditionKind::Weak:
      return kind == GaugeKind::WeakTheta;
    case ConditionKind::Rhoades:
      return kind == GaugeKind::EtaContraction || kind == GaugeKind::Banach ||
             kind == GaugeKind::Tabulated;
    case ConditionKind::BoydWong:
    case ConditionKind::LFunction:
      return kind == GaugeKind::EtaContraction || kind == GaugeKind::Banach ||
             kind == GaugeKind::Rho || kind == GaugeKind::Tabulated;
    default:
      return false;
  }
}

PairPotential PairPotential::from_gauge(const FiniteMetricSpace& space,
                                        const Gauge& theta) {
  const int n = space.size();
  PairPotential phi;
  phi.name = "caristi(" + theta.name() + ")";
  phi.tol = kCompositeTol;
  phi.value.assign(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) {
        phi.value[i][j] = caristi_potential(theta, space.dist(i, j));
      }
    }
  }
  return phi;
}

std::vector<double> default_check_grid(const FiniteMetricSpace& space) {
  auto vals = space.distance_values();
  if (vals.empty()) {
    return {1.0};
  }
  auto grid = log_grid(vals.front(), vals.back(), 64);
  grid.insert(grid.end(), vals.begin(), vals.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

double tight_banach_alpha(const FiniteMetricSpace& space,
                          const SingleValuedMap& map) {
  return tight_alpha_impl(space, [&](int i, int j) {
    return space.dist(map.apply(i), map.apply(j));
  });
}

double tight_banach_alpha(const FiniteMetricSpace& space,
                          const MultiValuedMap& map) {
  return tight_alpha_impl(space, [&](int i, int j) {
    return hausdorff_distance(space, map.apply(i), map.apply(j));
  });
}

Certificate certify_map(const FiniteMetricSpace& space,
                        const SingleValuedMap& map, ConditionKind condition,
                        const Gauge& gauge, const CertifyOptions& opt) {
  if (map.size() != space.size()) {
    throw std::invalid_argument("certify_map: map size does not match space");
  }
  return certify_gauge_condition(
      space, condition, gauge,
      [&](int i, int j) { return space.dist(map.apply(i), map.apply(j)); },
      opt);
}

Certificate certify_map(const FiniteMetricSpace& space,
                        const MultiValuedMap& map, ConditionKind condition,
                        const Gauge& gauge, const CertifyOptions& opt) {
  if (map.size() != space.size()) {
    throw std::invalid_argument("certify_map: map size does not match space");
  }
  return certify_gauge_condition(
      space, condition, gauge,
      [&](int i, int j) {
        return hausdorff_distance(space, map.apply(i), map.apply(j));
      },
      opt);
}

Certificate certify_meir_keeler(const FiniteMetricSpace& space,
                                const SingleValuedMap& map,
                                const CertifyOptions& opt) {
  if (map.size() != space.size()) {
    throw std::invalid_argument(
        "certify_meir_keeler: map size does not match space");
  }
  return certify_mk_impl(
      space,
      [&](int i, int j) { return space.dist(map.apply(i), map.apply(j)); },
      opt);
}

Certificate certify_meir_keeler(const FiniteMetricSpace& space,
                                const MultiValuedMap& map,
                                const CertifyOptions& opt) {
  if (map.size() != space.size()) {
    throw std::invalid_argument(
        "certify_meir_keeler: map size does not match space");
  }
  return certify_mk_impl(
      space,
      [&](int i, int j) {
        return hausdorff_distance(space, map.apply(i), map.apply(j));
      },
      opt);
}

Certificate certify_caristi(const FiniteMetricSpace& space,
                            const SingleValuedMap& map,
                            const PointPotential& phi,
                            const CertifyOptions& opt) {
  if (map.size() != space.size()) {
    throw std::invalid_argument(
        "certify_caristi: map size does not match space");
  }
  validate_point_potential(phi, space.size());

  Certificate cert;
  cert.kind = ConditionKind::Caristi;
  cert.map_name = opt.map_name;
  cert.gauge_name = phi.name;
  const int n = space.size();
  for (int x = 0; x < n; ++x) {
    const int tx = map.apply(x);
    const double lhs = space.dist(x, tx);
    const double rhs = phi.value[x] - phi.value[tx];
    ++cert.pairs_checked;
    if (lhs > rhs + phi.tol) {
      cert.witness = PairWitness{x, tx, lhs, rhs};
      break;
    }
  }
  cert.pass = !cert.witness;
  return cert;
}

Certificate certify_caristi_two_var(const FiniteMetricSpace& space,
                                    const SingleValuedMap& map,
                                    const PairPotential& phi,
                                    const CertifyOptions& opt) {
  if (map.size() != space.size()) {
    throw std::invalid_argument(
        "certify_caristi_two_var: map size does not match space");
  }
  validate_pair_potential(phi, space.size());

  Certificate cert;
  cert.kind = ConditionKind::CaristiTwoVar;
  cert.map_name = opt.map_name;
  cert.gauge_name = phi.name;
  const int n = space.size();
  for (int x = 0; x < n && !cert.witness; ++x) {
    for (int y = 0; y < n; ++y) {
      if (y == x) continue;
      const int tx = map.apply(x);
      const int ty = map.apply(y);
      const double lhs = space.dist(x, y);
      const double rhs = phi.value[x][y] - phi.value[tx][ty];
      ++cert.pairs_checked;
      if (lhs > rhs + phi.tol) {
        cert.witness = PairWitness{x, y, lhs, rhs};
        break;
      }
    }
  }
  cert.pass = !cert.witness;
  return cert;
}

}  // namespace cfp
