#pragma once

// Triangle Algorithm for two finite convex hulls K = conv(A), K' = conv(B).
//
// Phase I moves a pair of iterates (p, p') in K x K' toward each other along
// pivot segments until either they are epsilon-close relative to the last
// pivot (the hulls intersect, approximately) or no pivot exists, in which case
// the perpendicular bisector of p p' separates the hulls (a witness pair).
//
// Phase II starts from a witness pair and shrinks the gap with weak pivots
// (extreme vertices along p - p'), re-running phase I whenever the pair stops
// being a witness, until the distance between the supporting hyperplanes
// through the extreme vertices is within epsilon * rho of d(p, p').

#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hullsep/geometry.hpp"
#include "hullsep/point_set.hpp"
#include "hullsep/report.hpp"

namespace hullsep {

enum class Side { A, B };

inline Side other(Side s) { return s == Side::A ? Side::B : Side::A; }

enum class PivotKind { None, InA, InB };

struct PivotResult {
  PivotKind kind = PivotKind::None;
  std::size_t index = 0;
  bool is_weak = false;
};

/// Candidate indices scanned before the full sets (non-bounding heuristic).
struct PivotFilter {
  std::vector<std::size_t> a;
  std::vector<std::size_t> b;
};

/// Points of A beyond p along p' - p, and points of B beyond p' along p - p'.
/// Every pivot lies in this subset.
PivotFilter nonbounding_candidates(const ConvexIterate& a, const ConvexIterate& b);

/// Looks for a pivot: first argmax{(p' - p).v : v in A}, accepted when
/// 2 v.(p' - p) >= |p'|^2 - |p|^2; otherwise the symmetric test over B.
/// With a filter, each side scans its subset first and falls back to the
/// full set only when the subset has no pivot. Ties go to the lowest index.
PivotResult find_pivot(const ConvexIterate& a, const ConvexIterate& b, const PivotFilter* filter = nullptr);

struct SupportExtremes {
  std::size_t a_index = 0;  // argmin h.x over A
  std::size_t b_index = 0;  // argmax h.x over B
  /// (h.a - h.b) / |h|; negative when h does not separate.
  double delta_lower = 0.0;
};

SupportExtremes support_extremes(PointView normal, const PointSet& a, const PointSet& b);

/// Upper and lower distance bounds of a pair and their split into the
/// contributions of each side.
struct GapEstimate {
  double delta = 0.0;        // d(p, p')
  double delta_lower = 0.0;  // distance between the supporting planes
  double error = 0.0;        // delta - delta_lower
  double error_a = 0.0;      // delta / 2 - d(extreme of A, bisector)
  double error_b = 0.0;
  double rho_a = 0.0;        // d(p, extreme of A)
  double rho_b = 0.0;
  std::size_t extreme_a = 0;
  std::size_t extreme_b = 0;
};

/// Full recomputation from the iterate coordinates.
GapEstimate estimate_gap(const ConvexIterate& a, const ConvexIterate& b);

struct WitnessCertificate {
  ConvexIterate a;
  ConvexIterate b;
  Hyperplane bisector;  // A on the positive side, B on the negative side
};

/// Full scan: every point of A has side > -tol * scale and every point of B
/// has side < tol * scale, with scale = |normal| * max(1, max point norm).
bool witness_holds(const WitnessCertificate& w, double tol = 1e-9);

struct StepEvent {
  enum class Kind { Pivot, Joint, Weak };
  Kind kind = Kind::Pivot;
  Side side = Side::A;  // moved side (Joint moves both)
  double gap_before = 0.0;
  double gap_after = 0.0;
  std::size_t iteration = 0;
};

struct TriangleOptions {
  double epsilon = 1e-3;
  std::size_t max_iterations = 10000;

  bool use_cache = true;           // incremental dot-product cache
  bool joint_steps = true;         // closest points between both pivot segments
  bool zigzag_guard = true;        // midpoint vertices when progress stalls
  bool nonbounding_filter = true;  // scan the non-bounding subset first

  std::size_t zigzag_window = 8;
  double zigzag_epsilon = 1e-3;
  std::size_t max_synthetic = 64;
  std::size_t gram_budget_bytes = std::size_t{256} << 20;

  /// Called after every step; used by instrumented runs.
  std::function<void(const StepEvent&)> on_step;

  void validate() const;
};

struct Ta1Result {
  SolveReport report;
  ConvexIterate a;
  ConvexIterate b;
  std::optional<WitnessCertificate> witness;  // set iff status == Separated
};

/// Phase I. Starting iterates default to the centroids.
Ta1Result ta1_solve(const PointSet& a, const PointSet& b, const TriangleOptions& options = {},
                    std::optional<ConvexIterate> start_a = std::nullopt,
                    std::optional<ConvexIterate> start_b = std::nullopt);

struct Ta2Result {
  SolveReport report;  // support_planes always set
  WitnessCertificate witness;
  GapEstimate gap;
};

/// Phase II from a witness pair. Throws Error if `witness` does not separate.
Ta2Result ta2_solve(const WitnessCertificate& witness, const TriangleOptions& options = {});

struct DistanceResult {
  SolveReport report;  // iterations and time cover both phases
  ConvexIterate a;
  ConvexIterate b;
  std::optional<WitnessCertificate> witness;
  std::optional<GapEstimate> gap;
  std::size_t phase1_iterations = 0;
};

/// Phase I followed, when the hulls are separated, by phase II on the
/// remaining iteration budget.
DistanceResult ta_distance(const PointSet& a, const PointSet& b, const TriangleOptions& options = {});

// ---------------------------------------------------------------------------
// Building blocks, exposed for testing and reuse.

struct JointStep {
  Point a;
  Point b;
  double s = 0.0;  // step taken along a -> pivot_a
  double t = 0.0;  // step taken along b -> pivot_b
};

/// Moves both iterates at once to the closest pair of points on [a, pivot_a]
/// and [b, pivot_b]. Never worse than either single move.
JointStep joint_step(PointView a, PointView pivot_a, PointView b, PointView pivot_b);

/// Dot products of both iterates with every vertex ("column"), plus their
/// squared norms and mutual product, maintained under affine steps.
class DotCache {
 public:
  DotCache() = default;
  /// Columns are given by a callback returning the column's point.
  DotCache(PointView a, PointView b, std::size_t columns, const std::function<PointView(std::size_t)>& column);

  std::size_t columns() const { return dots_[0].size(); }
  double dot(Side s, std::size_t column) const { return dots_[index(s)][column]; }
  double squared_norm(Side s) const { return sq_[index(s)]; }
  double cross() const { return cross_; }

  /// Iterate on side `s` moved to (1 - alpha) * iterate + alpha * column;
  /// `row` holds the column's products with every column.
  void step(Side s, double alpha, std::size_t column, std::span<const double> row);
  void add_column(double dot_a, double dot_b);

 private:
  static std::size_t index(Side s) { return s == Side::A ? 0 : 1; }

  std::vector<double> dots_[2];
  double sq_[2] = {0.0, 0.0};
  double cross_ = 0.0;
};

/// Identifies a vertex used as a pivot; ids are opaque to the guard.
struct VertexRef {
  Side side = Side::A;
  std::size_t id = 0;
  bool operator==(const VertexRef&) const = default;
};

/// Sliding window over recent steps. Reports the two most frequently used
/// pivots of the busier side once the gap has shrunk by less than
/// epsilon * gap over a full window.
class ZigzagGuard {
 public:
  explicit ZigzagGuard(std::size_t window = 8, double epsilon = 1e-3);

  void record(double gap_before, double gap_after, std::span<const VertexRef> pivots);
  std::optional<std::pair<VertexRef, VertexRef>> detect() const;
  void clear() { history_.clear(); }

 private:
  struct Entry {
    double gap_before;
    double gap_after;
    std::vector<VertexRef> pivots;
  };
  std::size_t window_;
  double epsilon_;
  std::deque<Entry> history_;
};

/// Midpoint of two weighted combinations of the same set.
Combination midpoint_combination(const Combination& x, const Combination& y);

}  // namespace hullsep
