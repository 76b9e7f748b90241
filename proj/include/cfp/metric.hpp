#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cfp {

using DistanceMatrix = std::vector<std::vector<double>>;

/// Absolute tolerance for composite arithmetic (triangle sums, telescoping).
/// Pointwise strict inequalities elsewhere are compared exactly.
inline constexpr double kCompositeTol = 1e-12;

enum class MetricAxiom { ZeroDiagonal, Symmetry, Positivity, Triangle };

const char* to_string(MetricAxiom axiom);

/// One axiom violation with witness indices.  For Triangle the violated
/// inequality is dist[i][j] <= dist[i][k] + dist[k][j]; other axioms use
/// k = -1.  lhs/rhs are the two sides of the violated inequality.
struct AxiomViolation {
  MetricAxiom axiom;
  int i = -1;
  int j = -1;
  int k = -1;
  double lhs = 0.0;
  double rhs = 0.0;
};

std::string describe(const AxiomViolation& v);

/// Checks zero diagonal, symmetry, positivity and the triangle inequality
/// (within kCompositeTol) and returns every violation found, in deterministic
/// row-major scan order.  Throws std::invalid_argument when the matrix is not
/// square or contains non-finite entries.
std::vector<AxiomViolation> check_metric_axioms(const DistanceMatrix& dist);

/// Shortest-path closure of a symmetric, zero-diagonal, positive off-diagonal
/// matrix.  Output is entrywise <= input, satisfies all four axioms and is an
/// exact fixed point of the repair (passes are iterated until stable so that
/// repeated application is the identity).  Throws std::invalid_argument when
/// the input is asymmetric, has a nonzero diagonal or a non-positive
/// off-diagonal entry.
DistanceMatrix repair_triangle(const DistanceMatrix& dist);

/// A finite metric space: labelled points plus a validated distance matrix.
/// Construction runs check_metric_axioms and rejects invalid input.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace(std::vector<std::string> labels, DistanceMatrix dist);

  /// Convenience constructor with synthetic labels "p0", "p1", ...
  static FiniteMetricSpace from_matrix(DistanceMatrix dist);

  int size() const { return static_cast<int>(dist_.size()); }
  double dist(int i, int j) const;
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int i) const;
  const DistanceMatrix& matrix() const { return dist_; }
  std::optional<int> index_of(std::string_view label) const;

  /// Sorted distinct positive pairwise distances.
  std::vector<double> distance_values() const;

 private:
  std::vector<std::string> labels_;
  DistanceMatrix dist_;
};

/// Nonempty set of point indices, kept sorted and deduplicated.  Equality is
/// structural, so sets behave as values.
class PointSet {
 public:
  PointSet(std::vector<int> members, int space_size);

  const std::vector<int>& members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool contains(int idx) const;

  bool operator==(const PointSet& other) const = default;

 private:
  std::vector<int> members_;
};

/// Total self-map given by image[i] = index of T(point i).
class SingleValuedMap {
 public:
  SingleValuedMap(std::vector<int> image, int space_size);

  int apply(int i) const;
  const std::vector<int>& image() const { return image_; }
  int size() const { return static_cast<int>(image_.size()); }

 private:
  std::vector<int> image_;
};

/// Set-valued self-map: images[i] = T(point i), each a nonempty PointSet.
class MultiValuedMap {
 public:
  MultiValuedMap(std::vector<PointSet> images, int space_size);

  const PointSet& apply(int i) const;
  const std::vector<PointSet>& images() const { return images_; }
  int size() const { return static_cast<int>(images_.size()); }

 private:
  std::vector<PointSet> images_;
};

/// min over a in A of dist(x, a).
double point_to_set_distance(const FiniteMetricSpace& space, int x,
                             const PointSet& a);

/// sup over a in A of dist(a, B).
double directed_hausdorff(const FiniteMetricSpace& space, const PointSet& a,
                          const PointSet& b);

/// max of the two directed components.
double hausdorff_distance(const FiniteMetricSpace& space, const PointSet& a,
                          const PointSet& b);

}  // namespace cfp
