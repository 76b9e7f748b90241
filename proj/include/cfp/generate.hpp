#pragma once

#include "cfp/bellman.hpp"
#include "cfp/metric.hpp"
#include "cfp/rng.hpp"

namespace cfp {

/// Valid metric space on n points: a symmetric uniform draw from
/// [0.05, 1.05) run through repair_triangle, so no rejection is needed.
FiniteMetricSpace random_space(Rng& rng, int n);

/// Uniform self-map: image[i] drawn independently.
SingleValuedMap random_map(Rng& rng, int n);

/// Self-map biased toward a random hub point (70% of images collapse to
/// the hub), which contracts far more often than a uniform draw.
SingleValuedMap hub_map(Rng& rng, int n);

SingleValuedMap constant_map(int n, int target);

/// Set-valued map built to satisfy H(Tx, Ty) <= 0.8 * d(x, y): a base
/// single-valued contraction with tight modulus <= 0.7 (hub or constant
/// maps, rejection-sampled) is fattened with extra points lying within
/// 0.05 * min-distance of the base image, leaving a wide margin under the
/// 0.8 bound.
MultiValuedMap contractive_multi_map(Rng& rng, const FiniteMetricSpace& space);

/// Gauge modulus the contractive_multi_map construction guarantees.
inline constexpr double kMultiMapAlpha = 0.8;

/// Nonempty subset drawn by including each point with probability 1/2
/// (falling back to one uniform point when the draw comes up empty).
PointSet random_point_set(Rng& rng, int space_size);

ValueFunction random_value_function(Rng& rng, int n, double lo, double hi);

/// Affine-aggregator dynamic program with slope beta drawn from
/// [0.05, beta_cap), rewards in [-1, 1) and uniform transitions.
BellmanProblem random_bellman_problem(Rng& rng, int max_states,
                                      int max_decisions, double beta_cap);

}  // namespace cfp
