#include "cfp/metric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cfp {

namespace {

void require_square_finite(const DistanceMatrix& dist, const char* who) {
  const auto n = dist.size();
  if (n == 0) {
    throw std::invalid_argument(std::string(who) + ": empty matrix");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i].size() != n) {
      std::ostringstream os;
      os << who << ": row " << i << " has " << dist[i].size()
         << " entries, expected " << n;
      throw std::invalid_argument(os.str());
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(dist[i][j])) {
        std::ostringstream os;
        os << who << ": non-finite entry at (" << i << ", " << j << ")";
        throw std::invalid_argument(os.str());
      }
    }
  }
}

}  // namespace

const char* to_string(MetricAxiom axiom) {
  switch (axiom) {
    case MetricAxiom::ZeroDiagonal:
      return "zero-diagonal";
    case MetricAxiom::Symmetry:
      return "symmetry";
    case MetricAxiom::Positivity:
      return "positivity";
    case MetricAxiom::Triangle:
      return "triangle";
  }
  return "unknown";
}

std::string describe(const AxiomViolation& v) {
  std::ostringstream os;
  os << to_string(v.axiom) << " violated at (" << v.i << ", " << v.j;
  if (v.k >= 0) {
    os << ", " << v.k;
  }
  os << "): " << v.lhs;
  os << (v.axiom == MetricAxiom::Positivity ? " <= " : " > ") << v.rhs;
  return os.str();
}

std::vector<AxiomViolation> check_metric_axioms(const DistanceMatrix& dist) {
  require_square_finite(dist, "check_metric_axioms");
  const int n = static_cast<int>(dist.size());
  std::vector<AxiomViolation> out;

  for (int i = 0; i < n; ++i) {
    if (std::fabs(dist[i][i]) > kCompositeTol) {
      out.push_back({MetricAxiom::ZeroDiagonal, i, i, -1, dist[i][i], 0.0});
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::fabs(dist[i][j] - dist[j][i]) > kCompositeTol) {
        out.push_back({MetricAxiom::Symmetry, i, j, -1, dist[i][j], dist[j][i]});
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && dist[i][j] <= 0.0) {
        out.push_back({MetricAxiom::Positivity, i, j, -1, dist[i][j], 0.0});
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const double via = dist[i][k] + dist[k][j];
        if (dist[i][j] > via + kCompositeTol) {
          out.push_back({MetricAxiom::Triangle, i, j, k, dist[i][j], via});
        }
      }
    }
  }
  return out;
}

DistanceMatrix repair_triangle(const DistanceMatrix& dist) {
  require_square_finite(dist, "repair_triangle");
  const int n = static_cast<int>(dist.size());
  for (int i = 0; i < n; ++i) {
    if (dist[i][i] != 0.0) {
      throw std::invalid_argument("repair_triangle: nonzero diagonal");
    }
    for (int j = 0; j < n; ++j) {
      if (i != j && dist[i][j] <= 0.0) {
        throw std::invalid_argument(
            "repair_triangle: non-positive off-diagonal entry");
      }
      if (std::fabs(dist[i][j] - dist[j][i]) > kCompositeTol) {
        throw std::invalid_argument("repair_triangle: asymmetric input");
      }
    }
  }

  DistanceMatrix d = dist;
  // Floyd-Warshall, iterated to an exact floating-point fixed point so the
  // repair is idempotent bit for bit.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const double via = d[i][k] + d[k][j];
          if (via < d[i][j]) {
            d[i][j] = via;
            changed = true;
          }
        }
      }
    }
  }
  return d;
}

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> labels,
                                     DistanceMatrix dist)
    : labels_(std::move(labels)), dist_(std::move(dist)) {
  if (labels_.size() != dist_.size()) {
    throw std::invalid_argument(
        "FiniteMetricSpace: label count does not match matrix size");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    for (std::size_t j = i + 1; j < labels_.size(); ++j) {
      if (labels_[i] == labels_[j]) {
        throw std::invalid_argument("FiniteMetricSpace: duplicate label '" +
                                    labels_[i] + "'");
      }
    }
  }
  const auto violations = check_metric_axioms(dist_);
  if (!violations.empty()) {
    std::ostringstream os;
    os << "FiniteMetricSpace: invalid metric (" << violations.size()
       << " violation" << (violations.size() == 1 ? "" : "s") << "): "
       << describe(violations.front());
    throw std::invalid_argument(os.str());
  }
}

FiniteMetricSpace FiniteMetricSpace::from_matrix(DistanceMatrix dist) {
  std::vector<std::string> labels(dist.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    labels[i] = "p" + std::to_string(i);
  }
  return FiniteMetricSpace(std::move(labels), std::move(dist));
}

double FiniteMetricSpace::dist(int i, int j) const {
  if (i < 0 || j < 0 || i >= size() || j >= size()) {
    throw std::out_of_range("FiniteMetricSpace::dist: index out of range");
  }
  return dist_[i][j];
}

const std::string& FiniteMetricSpace::label(int i) const {
  if (i < 0 || i >= size()) {
    throw std::out_of_range("FiniteMetricSpace::label: index out of range");
  }
  return labels_[i];
}

std::optional<int> FiniteMetricSpace::index_of(std::string_view label) const {
  for (int i = 0; i < size(); ++i) {
    if (labels_[i] == label) {
      return i;
    }
  }
  return std::nullopt;
}

std::vector<double> FiniteMetricSpace::distance_values() const {
  std::vector<double> vals;
  for (int i = 0; i < size(); ++i) {
    for (int j = i + 1; j < size(); ++j) {
      vals.push_back(dist_[i][j]);
    }
  }
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return vals;
}

PointSet::PointSet(std::vector<int> members, int space_size)
    : members_(std::move(members)) {
  if (members_.empty()) {
    throw std::invalid_argument("PointSet: empty set");
  }
  for (int idx : members_) {
    if (idx < 0 || idx >= space_size) {
      throw std::invalid_argument("PointSet: index out of range");
    }
  }
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()),
                 members_.end());
}

bool PointSet::contains(int idx) const {
  return std::binary_search(members_.begin(), members_.end(), idx);
}

SingleValuedMap::SingleValuedMap(std::vector<int> image, int space_size)
    : image_(std::move(image)) {
  if (static_cast<int>(image_.size()) != space_size) {
    throw std::invalid_argument(
        "SingleValuedMap: image size does not match space size");
  }
  for (int idx : image_) {
    if (idx < 0 || idx >= space_size) {
      throw std::invalid_argument("SingleValuedMap: image index out of range");
    }
  }
}

int SingleValuedMap::apply(int i) const {
  if (i < 0 || i >= size()) {
    throw std::out_of_range("SingleValuedMap::apply: index out of range");
  }
  return image_[i];
}

MultiValuedMap::MultiValuedMap(std::vector<PointSet> images, int space_size)
    : images_(std::move(images)) {
  if (static_cast<int>(images_.size()) != space_size) {
    throw std::invalid_argument(
        "MultiValuedMap: image count does not match space size");
  }
  for (const auto& set : images_) {
    if (set.members().back() >= space_size) {
      throw std::invalid_argument("MultiValuedMap: image index out of range");
    }
  }
}

const PointSet& MultiValuedMap::apply(int i) const {
  if (i < 0 || i >= size()) {
    throw std::out_of_range("MultiValuedMap::apply: index out of range");
  }
  return images_[i];
}

double point_to_set_distance(const FiniteMetricSpace& space, int x,
                             const PointSet& a) {
  double best = space.dist(x, a.members().front());
  for (std::size_t m = 1; m < a.members().size(); ++m) {
    best = std::min(best, space.dist(x, a.members()[m]));
  }
  return best;
}

double directed_hausdorff(const FiniteMetricSpace& space, const PointSet& a,
                          const PointSet& b) {
  double worst = 0.0;
  for (int p : a.members()) {
    worst = std::max(worst, point_to_set_distance(space, p, b));
  }
  return worst;
}

double hausdorff_distance(const FiniteMetricSpace& space, const PointSet& a,
                          const PointSet& b) {
  return std::max(directed_hausdorff(space, a, b),
                  directed_hausdorff(space, b, a));
}

}  // namespace cfp
