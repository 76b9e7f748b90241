#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cfp/gauge.hpp"
#include "cfp/metric.hpp"

namespace cfp {

enum class ConditionKind {
  Caristi,             // d(x,Tx) <= phi(x) - phi(Tx), per-point table
  CaristiTwoVar,       // d(x,y) <= phi(x,y) - phi(Tx,Ty), per-pair table
  Banach,              // D(x,y) <= alpha * d(x,y)
  Eta,                 // D(x,y) <= eta(d(x,y))
  MizoguchiTakahashi,  // D(x,y) <= eta(d(x,y)) * d(x,y)
  Rhoades,             // D(x,y) <= d(x,y) - eta(d(x,y))
  Weak,                // D(x,y) <= d(x,y) - theta(d(x,y))
  BoydWong,            // D(x,y) <= phi(d(x,y)), phi below identity, right-usc
  MeirKeeler,          // windowed contraction, gauge-free
  LFunction,           // D(x,y) < phi(d(x,y)), phi an L-function
  RhoBellman           // issued by certify_bellman
};

const char* to_string(ConditionKind kind);
std::optional<ConditionKind> condition_kind_from_string(std::string_view s);

/// True when the condition accepts a gauge of the given declared kind.
bool condition_accepts(ConditionKind condition, GaugeKind kind);

/// Per-point potential table.  tol is the slack allowed in the caristi
/// inequality: 0 for user-supplied tables, kCompositeTol for computed ones.
struct PointPotential {
  std::vector<double> value;
  double tol = 0.0;
  std::string name;
};

/// Per-pair potential table with the same tolerance convention.
struct PairPotential {
  std::vector<std::vector<double>> value;
  double tol = 0.0;
  std::string name;

  /// value[i][j] = caristi_potential(theta, dist(i,j)); 0 on the diagonal.
  /// Computed values carry tol = kCompositeTol.
  static PairPotential from_gauge(const FiniteMetricSpace& space,
                                  const Gauge& theta);
};

/// Offending pair for a failed pairwise inequality; lhs > rhs (+ tol) is the
/// violation, so re-evaluating the condition at (x, y) reproduces it.
struct PairWitness {
  int x = -1;
  int y = -1;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// One certified level: for meir-keeler a (epsilon, delta) pair, for
/// l-function windows the (s, delta) pair with phi <= s on [s, s + delta].
struct LevelRecord {
  double level = 0.0;
  double delta = 0.0;
};

struct Certificate {
  ConditionKind kind;
  std::string map_name;
  std::string gauge_name;
  bool pass = false;
  int pairs_checked = 0;
  std::optional<PairWitness> witness;
  GaugeReport gauge_report;          // property checks behind the condition
  std::vector<double> grid;          // evaluation grid used for those checks
  std::vector<LevelRecord> levels;   // meir-keeler / l-function records
};

struct CertifyOptions {
  std::vector<double> grid;  // empty -> default_check_grid(space)
  std::string map_name;
};

/// All distinct positive pairwise distances of the space plus a 64-point
/// log-spaced grid spanning them.
std::vector<double> default_check_grid(const FiniteMetricSpace& space);

/// Smallest double alpha such that the product-form check
/// image_distance <= alpha * dist passes on every pair (ratios are rounded
/// up until the check holds).  0 for spaces without distinct pairs.  May be
/// >= 1 for non-contractive maps.
double tight_banach_alpha(const FiniteMetricSpace& space,
                          const SingleValuedMap& map);
double tight_banach_alpha(const FiniteMetricSpace& space,
                          const MultiValuedMap& map);

/// Certifies a gauge condition by checking the condition's gauge properties
/// on the grid and then exhaustively scanning all ordered pairs (x, y),
/// x != y, of the space.  Single-valued maps compare dist(Tx, Ty); set
/// valued maps compare hausdorff_distance(Tx, Ty).  Inequalities are
/// evaluated with margin 0.  Throws std::invalid_argument for conditions
/// that need a potential table (caristi kinds) or no gauge (meir-keeler),
/// and for gauge kinds the condition does not accept.
Certificate certify_map(const FiniteMetricSpace& space,
                        const SingleValuedMap& map, ConditionKind condition,
                        const Gauge& gauge, const CertifyOptions& opt = {});
Certificate certify_map(const FiniteMetricSpace& space,
                        const MultiValuedMap& map, ConditionKind condition,
                        const Gauge& gauge, const CertifyOptions& opt = {});

/// Gauge-free windowed-contraction certificate.  Passes iff every pair
/// contracts strictly.  For each distinct distance epsilon a window width
/// delta is recorded; deltas are searched among the halved gaps between
/// consecutive distinct distances and capped at
/// epsilon * (1 - rho) / (2 * rho), where rho is the tight contraction
/// modulus, so every recorded delta stays inside the analytic window of the
/// measured modulus.
Certificate certify_meir_keeler(const FiniteMetricSpace& space,
                                const SingleValuedMap& map,
                                const CertifyOptions& opt = {});
Certificate certify_meir_keeler(const FiniteMetricSpace& space,
                                const MultiValuedMap& map,
                                const CertifyOptions& opt = {});

/// d(x, Tx) <= phi(x) - phi(Tx) for every point, with the table's slack.
Certificate certify_caristi(const FiniteMetricSpace& space,
                            const SingleValuedMap& map,
                            const PointPotential& phi,
                            const CertifyOptions& opt = {});

/// d(x, y) <= phi(x, y) - phi(Tx, Ty) for all ordered pairs x != y.
Certificate certify_caristi_two_var(const FiniteMetricSpace& space,
                                    const SingleValuedMap& map,
                                    const PairPotential& phi,
                                    const CertifyOptions& opt = {});

}  // namespace cfp
