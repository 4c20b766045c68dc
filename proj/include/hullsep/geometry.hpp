#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace hullsep {

/// Coordinates of a point in R^m. Sets store points contiguously and hand
/// out spans; free-standing points (iterates, normals) are owned vectors.
using Point = std::vector<double>;
using PointView = std::span<const double>;

/// Base class for every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Dense vector arithmetic. All routines require equal lengths.

double dot(PointView x, PointView y);
double squared_norm(PointView x);
double norm(PointView x);
double squared_distance(PointView x, PointView y);
double distance(PointView x, PointView y);

Point subtract(PointView x, PointView y);
Point midpoint(PointView x, PointView y);

/// (1 - t) * x + t * y
Point lerp(PointView x, PointView y, double t);

/// x <- (1 - t) * x + t * y, in place.
void lerp_inplace(std::span<double> x, PointView y, double t);

bool all_finite(PointView x);

// ---------------------------------------------------------------------------

/// {x : normal . x = offset}. side(x) > 0 on the half space the normal
/// points into.
struct Hyperplane {
  Point normal;
  double offset = 0.0;

  double side(PointView x) const { return dot(normal, x) - offset; }
  /// Signed Euclidean distance from x to the plane.
  double signed_distance(PointView x) const;
};

struct SegmentProjection {
  Point point;
  double alpha = 0.0;
  bool degenerate = false;  // the segment collapsed to a single point
};

/// Nearest point to x on the segment [y, z]; alpha is the parameter of the
/// result along y -> z, clamped to [0, 1]. A collapsed segment returns (y, 0)
/// with the degenerate flag set.
SegmentProjection nearest_on_segment(PointView x, PointView y, PointView z);

/// Two segments [p, v] and [p2, v2] sharing one dimension.
struct SegmentPair {
  PointView first_start, first_end;
  PointView second_start, second_end;
};

struct SegmentClosest {
  Point first;   // first_start + s * (first_end - first_start)
  Point second;  // second_start + t * (second_end - second_start)
  double s = 0.0;
  double t = 0.0;
  bool parallel = false;

  double gap() const { return distance(first, second); }
};

/// Closest pair of points between two segments in any dimension.
///
/// The unconstrained line-line solution is computed from the 2x2 normal
/// equations and clamped to [0, 1]. When a parameter has to be clamped the
/// other one is re-minimized against the clamped point, which makes the
/// result the exact minimizer over the unit square. Lines whose Gram
/// determinant is at most 1e-12 * |a|^2 |b|^2 are treated as parallel: s is
/// pinned to 0 and t solved alone.
///
/// The result is exactly symmetric: swapping the segments swaps (first, s)
/// with (second, t) bit for bit.
SegmentClosest closest_segment_points(const SegmentPair& pair);

/// Orthogonal bisector of [p, q]: normal p - q, offset (|p|^2 - |q|^2) / 2.
/// Throws Error when p == q.
Hyperplane bisector(PointView p, PointView q);

}  // namespace hullsep
