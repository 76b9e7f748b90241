#include "cfp/generate.hpp"

#include <algorithm>
#include <string>

#include "cfp/certify.hpp"

namespace cfp {

FiniteMetricSpace random_space(Rng& rng, int n) {
  if (n < 1) {
    throw std::invalid_argument("random_space: need at least one point");
  }
  DistanceMatrix dist(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = rng.uniform(0.05, 1.05);
      dist[i][j] = d;
      dist[j][i] = d;
    }
  }
  if (n > 1) {
    dist = repair_triangle(dist);
  }
  return FiniteMetricSpace::from_matrix(std::move(dist));
}

SingleValuedMap random_map(Rng& rng, int n) {
  std::vector<int> image(n);
  for (int i = 0; i < n; ++i) image[i] = rng.uniform_int(n);
  return SingleValuedMap(std::move(image), n);
}

SingleValuedMap hub_map(Rng& rng, int n) {
  const int hub = rng.uniform_int(n);
  std::vector<int> image(n);
  for (int i = 0; i < n; ++i) {
    image[i] = rng.uniform01() < 0.7 ? hub : rng.uniform_int(n);
  }
  return SingleValuedMap(std::move(image), n);
}

SingleValuedMap constant_map(int n, int target) {
  if (target < 0 || target >= n) {
    throw std::invalid_argument("constant_map: target out of range");
  }
  return SingleValuedMap(std::vector<int>(n, target), n);
}

MultiValuedMap contractive_multi_map(Rng& rng,
                                     const FiniteMetricSpace& space) {
  const int n = space.size();
  SingleValuedMap base = constant_map(n, n == 1 ? 0 : rng.uniform_int(n));
  for (int attempt = 0; attempt < 40 && n > 1; ++attempt) {
    SingleValuedMap candidate = hub_map(rng, n);
    if (tight_banach_alpha(space, candidate) <= 0.7) {
      base = std::move(candidate);
      break;
    }
  }

  double min_dist = 0.0;
  const auto values = space.distance_values();
  if (!values.empty()) min_dist = values.front();
  const double fatten = 0.05 * min_dist;

  std::vector<PointSet> images;
  images.reserve(n);
  for (int i = 0; i < n; ++i) {
    const int b = base.apply(i);
    std::vector<int> members{b};
    for (int z = 0; z < n; ++z) {
      if (z != b && space.dist(z, b) <= fatten && rng.uniform01() < 0.5) {
        members.push_back(z);
      }
    }
    images.emplace_back(std::move(members), n);
  }
  return MultiValuedMap(std::move(images), n);
}

PointSet random_point_set(Rng& rng, int space_size) {
  std::vector<int> members;
  for (int i = 0; i < space_size; ++i) {
    if (rng.uniform01() < 0.5) members.push_back(i);
  }
  if (members.empty()) members.push_back(rng.uniform_int(space_size));
  return PointSet(std::move(members), space_size);
}

ValueFunction random_value_function(Rng& rng, int n, double lo, double hi) {
  ValueFunction h(n);
  for (int i = 0; i < n; ++i) h[i] = rng.uniform(lo, hi);
  return h;
}

BellmanProblem random_bellman_problem(Rng& rng, int max_states,
                                      int max_decisions, double beta_cap) {
  if (max_states < 1 || max_decisions < 1) {
    throw std::invalid_argument("random_bellman_problem: empty grids");
  }
  const int w = 1 + rng.uniform_int(max_states);
  const int d = 1 + rng.uniform_int(max_decisions);
  std::vector<std::string> states(w);
  std::vector<std::string> decisions(d);
  for (int x = 0; x < w; ++x) states[x] = "s" + std::to_string(x);
  for (int y = 0; y < d; ++y) decisions[y] = "a" + std::to_string(y);

  std::vector<std::vector<double>> reward(w, std::vector<double>(d));
  std::vector<std::vector<int>> transition(w, std::vector<int>(d));
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < d; ++y) {
      reward[x][y] = rng.uniform(-1.0, 1.0);
      transition[x][y] = rng.uniform_int(w);
    }
  }
  const double beta = rng.uniform(0.05, beta_cap);
  const double c = rng.uniform(-1.0, 1.0);
  return BellmanProblem(std::move(states), std::move(decisions),
                        std::move(reward), std::move(transition),
                        Aggregator::affine(c, beta));
}

}  // namespace cfp
