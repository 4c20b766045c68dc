#include "hullsep/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace hullsep {

namespace {

void require_same_size(PointView x, PointView y) {
  if (x.size() != y.size()) throw Error("dimension mismatch");
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Lexicographic order on (start, end) used to canonicalize segment pairs.
bool segment_less(PointView a0, PointView a1, PointView b0, PointView b1) {
  if (std::lexicographical_compare(b0.begin(), b0.end(), a0.begin(), a0.end())) return false;
  if (std::lexicographical_compare(a0.begin(), a0.end(), b0.begin(), b0.end())) return true;
  return std::lexicographical_compare(a1.begin(), a1.end(), b1.begin(), b1.end());
}

SegmentClosest closest_ordered(const SegmentPair& pr) {
  const PointView p = pr.first_start;
  const PointView q = pr.second_start;
  const Point da = subtract(pr.first_end, p);
  const Point db = subtract(pr.second_end, q);
  const Point r = subtract(p, q);

  const double aa = dot(da, da);
  const double bb = dot(db, db);
  const double br = dot(db, r);

  SegmentClosest out;
  double s = 0.0;
  double t = 0.0;
  if (aa == 0.0 && bb == 0.0) {
    out.parallel = true;
  } else if (aa == 0.0) {
    t = nearest_on_segment(p, pr.second_start, pr.second_end).alpha;
  } else {
    const double ar = dot(da, r);
    if (bb == 0.0) {
      s = clamp01(-ar / aa);
    } else {
      const double ab = dot(da, db);
      const double denom = aa * bb - ab * ab;
      if (denom > 1e-12 * aa * bb) {
        s = clamp01((ab * br - bb * ar) / denom);
      } else {
        out.parallel = true;
        s = 0.0;
      }
      t = (ab * s + br) / bb;
      if (t < 0.0) {
        t = 0.0;
        s = clamp01(-ar / aa);
      } else if (t > 1.0) {
        t = 1.0;
        s = clamp01((ab - ar) / aa);
      }
    }
  }
  out.s = s;
  out.t = t;
  out.first = lerp(p, pr.first_end, s);
  out.second = lerp(q, pr.second_end, t);
  return out;
}

}  // namespace

double dot(PointView x, PointView y) {
  require_same_size(x, y);
  // Four independent partial sums; a fixed order keeps results reproducible.
  const std::size_t n = x.size();
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc[0] += x[i] * y[i];
    acc[1] += x[i + 1] * y[i + 1];
    acc[2] += x[i + 2] * y[i + 2];
    acc[3] += x[i + 3] * y[i + 3];
  }
  for (; i < n; ++i) acc[0] += x[i] * y[i];
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

double squared_norm(PointView x) { return dot(x, x); }

double norm(PointView x) { return std::sqrt(squared_norm(x)); }

double squared_distance(PointView x, PointView y) {
  require_same_size(x, y);
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    acc += d * d;
  }
  return acc;
}

double distance(PointView x, PointView y) { return std::sqrt(squared_distance(x, y)); }

Point subtract(PointView x, PointView y) {
  require_same_size(x, y);
  Point out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
  return out;
}

Point midpoint(PointView x, PointView y) {
  require_same_size(x, y);
  Point out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = 0.5 * (x[i] + y[i]);
  return out;
}

Point lerp(PointView x, PointView y, double t) {
  Point out(x.begin(), x.end());
  lerp_inplace(out, y, t);
  return out;
}

void lerp_inplace(std::span<double> x, PointView y, double t) {
  require_same_size(x, y);
  if (t == 0.0) return;
  if (t == 1.0) {
    std::copy(y.begin(), y.end(), x.begin());
    return;
  }
  const double keep = 1.0 - t;
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = keep * x[i] + t * y[i];
}

bool all_finite(PointView x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

double Hyperplane::signed_distance(PointView x) const { return side(x) / norm(normal); }

SegmentProjection nearest_on_segment(PointView x, PointView y, PointView z) {
  require_same_size(x, y);
  require_same_size(y, z);
  SegmentProjection out;
  const double len2 = squared_distance(y, z);
  if (len2 == 0.0) {
    out.point.assign(y.begin(), y.end());
    out.degenerate = true;
    return out;
  }
  double num = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) num += (x[i] - y[i]) * (z[i] - y[i]);
  out.alpha = clamp01(num / len2);
  out.point = lerp(y, z, out.alpha);
  return out;
}

SegmentClosest closest_segment_points(const SegmentPair& pair) {
  require_same_size(pair.first_start, pair.first_end);
  require_same_size(pair.first_start, pair.second_start);
  require_same_size(pair.second_start, pair.second_end);
  if (!segment_less(pair.second_start, pair.second_end, pair.first_start, pair.first_end)) {
    return closest_ordered(pair);
  }
  SegmentClosest swapped = closest_ordered(
      {pair.second_start, pair.second_end, pair.first_start, pair.first_end});
  std::swap(swapped.first, swapped.second);
  std::swap(swapped.s, swapped.t);
  return swapped;
}

Hyperplane bisector(PointView p, PointView q) {
  require_same_size(p, q);
  if (std::equal(p.begin(), p.end(), q.begin())) {
    throw Error("bisector undefined: the two points coincide");
  }
  return {subtract(p, q), 0.5 * (squared_norm(p) - squared_norm(q))};
}

}  // namespace hullsep
