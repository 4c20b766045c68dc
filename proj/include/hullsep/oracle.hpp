#pragma once

// Reference computations that share no code with the solvers beyond vector
// arithmetic. Used by tests and acceptance checks.

#include <cstddef>
#include <string_view>
#include <vector>

#include "hullsep/geometry.hpp"
#include "hullsep/point_set.hpp"

namespace hullsep {

enum class OracleMethod {
  /// Min over pairs of simplex-grid points of both hulls. Small inputs only.
  GridEnum,
  /// Alternating exact projections onto each hull.
  AlternatingProjection,
  /// Exact minimum-norm point of the difference set {a_i - b_j}.
  MinkowskiNearestPoint,
};

std::string_view method_name(OracleMethod method);

struct OracleResult {
  double delta_star = 0.0;
  ConvexIterate a;
  ConvexIterate b;
  OracleMethod method = OracleMethod::MinkowskiNearestPoint;
  /// |delta_star - true distance| <= error_bound.
  double error_bound = 0.0;
  /// Certified lower bound from the supporting planes orthogonal to b - a
  /// (0 when they do not separate).
  double lower_bound = 0.0;
};

/// Default grid: 64 subdivisions of every simplex edge.
inline constexpr std::size_t kDefaultGridResolution = 64;

/// Throws Error when GridEnum would enumerate more than ~2e8 point pairs or
/// the difference set of MinkowskiNearestPoint exceeds 10^6 points.
OracleResult brute_force_distance(const PointSet& a, const PointSet& b,
                                  OracleMethod method = OracleMethod::MinkowskiNearestPoint,
                                  std::size_t resolution = kDefaultGridResolution);

/// Nearest point of conv(points) to the origin, as convex weights over the
/// points (Wolfe's active-set method).
std::vector<double> min_norm_weights(const std::vector<Point>& points);

/// True iff one set lies strictly on each side of the plane, in either
/// orientation, allowing tol * scale of slack with
/// scale = |normal| * max(1, largest point norm).
bool check_separation(const Hyperplane& plane, const PointSet& a, const PointSet& b, double tol);

/// (min over b of w.x + offset - max over a of w.x + offset) / |w|.
/// Negative when w does not separate. Throws Error on w == 0.
double reported_distance(PointView w, double offset, const PointSet& a, const PointSet& b);

}  // namespace hullsep
