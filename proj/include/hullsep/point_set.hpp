#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "hullsep/geometry.hpp"

namespace hullsep {

/// A finite, non-empty set of points of uniform dimension, stored row-major.
/// Immutable after construction; squared norms are cached on construction.
class PointSet {
 public:
  /// `coords` holds size * dim values, one point per row.
  PointSet(std::size_t dim, std::vector<double> coords);

  static PointSet from_rows(const std::vector<Point>& rows);

  std::size_t size() const { return squared_norms_.size(); }
  std::size_t dim() const { return dim_; }

  PointView operator[](std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  double squared_norm(std::size_t i) const { return squared_norms_[i]; }
  double max_norm() const { return max_norm_; }

  std::span<const double> data() const { return coords_; }
  std::vector<Point> rows() const;

  /// A copy with every point shifted by `offset`.
  PointSet translated(PointView offset) const;

  /// Appends the points of `other`; both sets must share a dimension.
  PointSet concat(const PointSet& other) const;

 private:
  std::size_t dim_;
  std::vector<double> coords_;
  std::vector<double> squared_norms_;
  double max_norm_ = 0.0;
};

/// Exact diameter: maximum pairwise Euclidean distance by a full O(n^2) scan.
double diameter(const PointSet& set);

/// Sparse convex weights over the original points of a set.
using Combination = std::vector<std::pair<std::size_t, double>>;

/// A point of conv(S) that carries its convex-combination coefficients.
///
/// Coefficients always refer to the original points of the parent set, so
/// steps toward synthetic points (midpoints, for instance) are expanded into
/// their underlying weights. Coefficients below 1e-15 are snapped to zero.
class ConvexIterate {
 public:
  static ConvexIterate vertex(const PointSet& set, std::size_t index);
  static ConvexIterate centroid(const PointSet& set);
  /// Throws Error unless the weights are non-negative and sum to one (1e-9).
  static ConvexIterate from_coefficients(const PointSet& set, std::vector<double> weights);

  const PointSet& set() const { return *set_; }
  PointView point() const { return point_; }
  std::span<const double> coefficients() const { return coeffs_; }

  /// this <- (1 - alpha) * this + alpha * set[index]
  void step_toward_vertex(std::size_t index, double alpha);
  /// this <- (1 - alpha) * this + alpha * target, where `target_point` is the
  /// point described by the weights in `target`.
  void step_toward(const Combination& target, PointView target_point, double alpha);

  /// Number of strictly positive coefficients.
  std::size_t support_size() const;
  double coefficient_sum() const;
  /// |point - sum_i c_i v_i|, re-synthesized from the coefficients.
  double resynthesis_error() const;

 private:
  ConvexIterate(const PointSet& set, std::vector<double> coeffs, Point point)
      : set_(&set), coeffs_(std::move(coeffs)), point_(std::move(point)) {}

  void scale_coefficients(double keep);

  const PointSet* set_;
  std::vector<double> coeffs_;
  Point point_;
};

}  // namespace hullsep
