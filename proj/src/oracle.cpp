#include "hullsep/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace hullsep {

namespace {

constexpr double kMaxGridPairs = 2e8;
constexpr std::size_t kMaxStoredGrid = 2000000;
constexpr std::size_t kMaxDifferencePoints = 1000000;
constexpr double kStall = 1e-10;
constexpr std::size_t kMaxRounds = 100000;

double max_norm(const PointSet& a, const PointSet& b) { return std::max({1.0, a.max_norm(), b.max_norm()}); }

// Binomial coefficient as a double; exact enough to compare against limits.
double grid_size(std::size_t parts, std::size_t resolution) {
  double count = 1.0;
  for (std::size_t k = 1; k < parts; ++k) count = count * static_cast<double>(resolution + k) / static_cast<double>(k);
  return count;
}

// Calls visit(counts) for every composition of `resolution` into `parts`
// non-negative integers.
void for_each_composition(std::size_t parts, std::size_t resolution,
                          const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> counts(parts, 0);
  std::function<void(std::size_t, std::size_t)> fill = [&](std::size_t slot, std::size_t left) {
    if (slot + 1 == parts) {
      counts[slot] = left;
      visit(counts);
      return;
    }
    for (std::size_t k = 0; k <= left; ++k) {
      counts[slot] = k;
      fill(slot + 1, left - k);
    }
  };
  fill(0, resolution);
}

Point combine(const PointSet& set, const std::vector<double>& weights) {
  Point x(set.dim(), 0.0);
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (weights[i] == 0.0) continue;
    for (std::size_t d = 0; d < x.size(); ++d) x[d] += weights[i] * set[i][d];
  }
  return x;
}

std::vector<double> normalized(std::vector<double> weights) {
  double sum = 0.0;
  for (double& w : weights) {
    w = std::max(w, 0.0);
    sum += w;
  }
  for (double& w : weights) w /= sum;
  return weights;
}

// Separation certified by the planes orthogonal to pb - pa through the
// extreme points of each set.
double certified_lower_bound(PointView pa, PointView pb, const PointSet& a, const PointSet& b) {
  const Point n = subtract(pb, pa);
  const double length = norm(n);
  if (length == 0.0) return 0.0;
  double top_a = -std::numeric_limits<double>::infinity();
  double bottom_b = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i) top_a = std::max(top_a, dot(n, a[i]));
  for (std::size_t j = 0; j < b.size(); ++j) bottom_b = std::min(bottom_b, dot(n, b[j]));
  return std::max(0.0, (bottom_b - top_a) / length);
}

std::vector<double> project_weights(const PointSet& set, PointView q) {
  std::vector<Point> shifted;
  shifted.reserve(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) shifted.push_back(subtract(set[i], q));
  return min_norm_weights(shifted);
}

OracleResult grid_enum(const PointSet& a, const PointSet& b, std::size_t resolution) {
  if (resolution == 0) throw Error("grid resolution must be positive");
  const double count_a = grid_size(a.size(), resolution);
  const double count_b = grid_size(b.size(), resolution);
  if (count_a * count_b > kMaxGridPairs || std::min(count_a, count_b) > static_cast<double>(kMaxStoredGrid))
    throw Error("grid enumeration too large for these set sizes and resolution");

  // Store the smaller grid, stream the larger one.
  const bool swap = count_b > count_a;
  const PointSet& stored = swap ? a : b;
  const PointSet& streamed = swap ? b : a;
  const double r = static_cast<double>(resolution);

  std::vector<Point> grid;
  std::vector<std::vector<std::size_t>> grid_counts;
  for_each_composition(stored.size(), resolution, [&](const std::vector<std::size_t>& counts) {
    std::vector<double> w(counts.begin(), counts.end());
    for (double& x : w) x /= r;
    grid.push_back(combine(stored, w));
    grid_counts.push_back(counts);
  });

  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_streamed;
  std::size_t best_stored = 0;
  std::vector<double> w(streamed.size());
  for_each_composition(streamed.size(), resolution, [&](const std::vector<std::size_t>& counts) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = counts[i] / r;
    const Point x = combine(streamed, w);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double d = squared_distance(x, grid[k]);
      if (d < best) {
        best = d;
        best_streamed = counts;
        best_stored = k;
      }
    }
  });

  auto weights_of = [&](const std::vector<std::size_t>& counts) {
    std::vector<double> out(counts.begin(), counts.end());
    for (double& x : out) x /= r;
    return out;
  };
  const std::vector<double> ws = weights_of(best_streamed);
  const std::vector<double> wt = weights_of(grid_counts[best_stored]);
  ConvexIterate ia = ConvexIterate::from_coefficients(a, swap ? wt : ws);
  ConvexIterate ib = ConvexIterate::from_coefficients(b, swap ? ws : wt);

  // Rounding barycentric weights to multiples of 1/r moves a point by at most
  // (n / 2r) * diameter.
  const double bound = (a.size() * diameter(a) + b.size() * diameter(b)) / (2.0 * r);
  const double lower = certified_lower_bound(ia.point(), ib.point(), a, b);
  return OracleResult{std::sqrt(best), std::move(ia), std::move(ib), OracleMethod::GridEnum, bound, lower};
}

OracleResult minkowski(const PointSet& a, const PointSet& b) {
  if (a.size() * b.size() > kMaxDifferencePoints) throw Error("difference set too large");
  std::vector<Point> diff;
  diff.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) diff.push_back(subtract(a[i], b[j]));
  const std::vector<double> lambda = min_norm_weights(diff);

  std::vector<double> wa(a.size(), 0.0), wb(b.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      wa[i] += lambda[i * b.size() + j];
      wb[j] += lambda[i * b.size() + j];
    }
  }
  ConvexIterate ia = ConvexIterate::from_coefficients(a, normalized(wa));
  ConvexIterate ib = ConvexIterate::from_coefficients(b, normalized(wb));
  const double delta = distance(ia.point(), ib.point());
  const double lower = certified_lower_bound(ia.point(), ib.point(), a, b);
  return OracleResult{delta, std::move(ia), std::move(ib), OracleMethod::MinkowskiNearestPoint,
                      1e-9 * max_norm(a, b), lower};
}

OracleResult alternating(const PointSet& a, const PointSet& b) {
  std::vector<double> wa(a.size(), 1.0 / a.size());
  Point pa = combine(a, wa);
  std::vector<double> wb = project_weights(b, pa);
  Point pb = combine(b, wb);
  double gap = distance(pa, pb);
  for (std::size_t round = 0; round < kMaxRounds; ++round) {
    wa = project_weights(a, pb);
    pa = combine(a, wa);
    wb = project_weights(b, pa);
    pb = combine(b, wb);
    const double next = distance(pa, pb);
    const bool stalled = gap - next <= kStall * std::max(1.0, next);
    gap = next;
    if (stalled) break;
  }
  ConvexIterate ia = ConvexIterate::from_coefficients(a, normalized(wa));
  ConvexIterate ib = ConvexIterate::from_coefficients(b, normalized(wb));
  const double delta = distance(ia.point(), ib.point());
  const double lower = certified_lower_bound(ia.point(), ib.point(), a, b);
  return OracleResult{delta, std::move(ia), std::move(ib), OracleMethod::AlternatingProjection,
                      std::max(0.0, delta - lower), lower};
}

}  // namespace

std::string_view method_name(OracleMethod method) {
  switch (method) {
    case OracleMethod::GridEnum: return "grid";
    case OracleMethod::AlternatingProjection: return "alternating";
    case OracleMethod::MinkowskiNearestPoint: return "minkowski";
  }
  return "unknown";
}

std::vector<double> min_norm_weights(const std::vector<Point>& points) {
  if (points.empty()) throw Error("no points");
  const std::size_t n = points.size();
  const std::size_t m = points.front().size();
  Eigen::MatrixXd P(m, n);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (points[i].size() != m) throw Error("dimension mismatch");
    for (std::size_t d = 0; d < m; ++d) P(d, i) = points[i][d];
    scale = std::max(scale, P.col(i).squaredNorm());
  }
  scale = std::max(scale, std::numeric_limits<double>::min());
  const double tol = 1e-12 * scale;

  // Minimizer of |sum mu_k p_k| over the affine hull of the active points.
  auto affine_min = [&](const std::vector<std::size_t>& active) {
    Eigen::VectorXd mu(active.size());
    if (active.size() == 1) {
      mu(0) = 1.0;
      return mu;
    }
    const Eigen::VectorXd p0 = P.col(active[0]);
    Eigen::MatrixXd M(m, active.size() - 1);
    for (std::size_t k = 1; k < active.size(); ++k) M.col(k - 1) = P.col(active[k]) - p0;
    const Eigen::VectorXd c = M.completeOrthogonalDecomposition().solve(-p0);
    mu(0) = 1.0 - c.sum();
    mu.tail(active.size() - 1) = c;
    return mu;
  };

  std::size_t start = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (P.col(i).squaredNorm() < P.col(start).squaredNorm()) start = i;
  std::vector<std::size_t> active{start};
  Eigen::VectorXd lambda = Eigen::VectorXd::Ones(1);
  Eigen::VectorXd x = P.col(start);

  for (std::size_t major = 0; major < 50 * n + 100; ++major) {
    const Eigen::VectorXd scores = P.transpose() * x;
    Eigen::Index j;
    const double lowest = scores.minCoeff(&j);
    if (x.squaredNorm() - lowest <= tol) break;
    if (std::find(active.begin(), active.end(), static_cast<std::size_t>(j)) != active.end()) break;
    active.push_back(static_cast<std::size_t>(j));
    lambda.conservativeResize(active.size());
    lambda(active.size() - 1) = 0.0;

    for (std::size_t minor = 0; minor <= active.size() + 1; ++minor) {
      const Eigen::VectorXd mu = affine_min(active);
      if (mu.minCoeff() > 1e-14) {
        lambda = mu;
        break;
      }
      double theta = 1.0;
      for (Eigen::Index k = 0; k < mu.size(); ++k)
        if (mu(k) <= 1e-14) theta = std::min(theta, lambda(k) / (lambda(k) - mu(k)));
      lambda = theta * mu + (1.0 - theta) * lambda;

      std::vector<std::size_t> kept;
      std::vector<double> kept_lambda;
      for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        if (lambda(k) > 1e-14) {
          kept.push_back(active[k]);
          kept_lambda.push_back(lambda(k));
        }
      }
      if (kept.empty()) {
        Eigen::Index top;
        lambda.maxCoeff(&top);
        kept.push_back(active[top]);
        kept_lambda.push_back(1.0);
      }
      active = kept;
      lambda = Eigen::Map<Eigen::VectorXd>(kept_lambda.data(), kept_lambda.size());
      lambda /= lambda.sum();
    }
    x = Eigen::VectorXd::Zero(m);
    for (std::size_t k = 0; k < active.size(); ++k) x += lambda(k) * P.col(active[k]);
  }

  std::vector<double> weights(n, 0.0);
  for (std::size_t k = 0; k < active.size(); ++k) weights[active[k]] = std::max(0.0, lambda(k));
  return normalized(weights);
}

OracleResult brute_force_distance(const PointSet& a, const PointSet& b, OracleMethod method, std::size_t resolution) {
  if (a.dim() != b.dim()) throw Error("dimension mismatch");
  switch (method) {
    case OracleMethod::GridEnum: return grid_enum(a, b, resolution);
    case OracleMethod::AlternatingProjection: return alternating(a, b);
    case OracleMethod::MinkowskiNearestPoint: return minkowski(a, b);
  }
  throw Error("unknown oracle method");
}

bool check_separation(const Hyperplane& plane, const PointSet& a, const PointSet& b, double tol) {
  if (plane.normal.size() != a.dim() || plane.normal.size() != b.dim()) throw Error("dimension mismatch");
  const double length = norm(plane.normal);
  if (length == 0.0) return false;
  const double slack = tol * length * max_norm(a, b);
  auto all_above = [&](const PointSet& s, double sign) {
    for (std::size_t i = 0; i < s.size(); ++i)
      if (!(sign * plane.side(s[i]) > -slack)) return false;
    return true;
  };
  return (all_above(a, 1.0) && all_above(b, -1.0)) || (all_above(a, -1.0) && all_above(b, 1.0));
}

double reported_distance(PointView w, double offset, const PointSet& a, const PointSet& b) {
  if (w.size() != a.dim() || w.size() != b.dim()) throw Error("dimension mismatch");
  const double length = norm(w);
  if (length == 0.0) throw Error("zero normal");
  double top_a = -std::numeric_limits<double>::infinity();
  double bottom_b = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i) top_a = std::max(top_a, dot(w, a[i]) + offset);
  for (std::size_t j = 0; j < b.size(); ++j) bottom_b = std::min(bottom_b, dot(w, b[j]) + offset);
  return (bottom_b - top_a) / length;
}

}  // namespace hullsep
