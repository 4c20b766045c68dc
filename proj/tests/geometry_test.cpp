#include "doctest.h"

#include <cmath>
#include <vector>

#include "hullsep/geometry.hpp"
#include "hullsep/instance.hpp"

using namespace hullsep;

namespace {

void check_point(PointView got, const Point& want, double tol = 1e-12) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(tol));
}

SegmentClosest closest(const Point& p, const Point& v, const Point& q, const Point& w) {
  return closest_segment_points({p, v, q, w});
}

}  // namespace

TEST_CASE("nearest_on_segment: foot at the start") {
  const auto r = nearest_on_segment(Point{0, 1}, Point{0, 0}, Point{2, 0});
  check_point(r.point, {0, 0});
  CHECK(r.alpha == 0.0);
}

TEST_CASE("nearest_on_segment: interior foot") {
  const auto r = nearest_on_segment(Point{1, 1}, Point{0, 0}, Point{2, 0});
  check_point(r.point, {1, 0});
  CHECK(r.alpha == doctest::Approx(0.5));
}

TEST_CASE("nearest_on_segment: clipped past the end") {
  const auto r = nearest_on_segment(Point{3, 1}, Point{0, 0}, Point{1, 0});
  check_point(r.point, {1, 0});
  CHECK(r.alpha == 1.0);
}

TEST_CASE("nearest_on_segment: collapsed segment") {
  const auto r = nearest_on_segment(Point{3, 1}, Point{1, 1}, Point{1, 1});
  CHECK(r.degenerate);
  CHECK(r.alpha == 0.0);
  check_point(r.point, {1, 1});
}

TEST_CASE("closest_segment_points: one parameter clamped") {
  const auto r = closest(Point{0, 0}, Point{2, 0}, Point{1, 1}, Point{1, 3});
  check_point(r.first, {1, 0});
  check_point(r.second, {1, 1});
  CHECK(r.s == doctest::Approx(0.5));
  CHECK(r.t == 0.0);
  CHECK(r.gap() == doctest::Approx(1.0));
  CHECK_FALSE(r.parallel);
}

TEST_CASE("closest_segment_points: parallel segments") {
  const auto r = closest(Point{0, 0}, Point{0, 2}, Point{2, 1}, Point{2, -1});
  CHECK(r.parallel);
  CHECK(r.s == 0.0);
  CHECK(r.t == doctest::Approx(0.5));
  check_point(r.first, {0, 0});
  check_point(r.second, {2, 0});
  CHECK(r.gap() == doctest::Approx(2.0));
}

TEST_CASE("closest_segment_points: identical segments touch") {
  const auto r = closest(Point{0, 0}, Point{1, 1}, Point{0, 0}, Point{1, 1});
  CHECK(r.gap() == doctest::Approx(0.0));
}

TEST_CASE("bisector examples") {
  const Hyperplane h = bisector(Point{0, 0}, Point{2, 0});
  check_point(h.normal, {-2, 0});
  CHECK(h.offset == doctest::Approx(-2.0));
  CHECK(h.side(Point{1, 0}) == doctest::Approx(0.0));

  const Hyperplane g = bisector(Point{1, 1}, Point{3, 3});
  check_point(g.normal, {-2, -2});
  CHECK(g.offset == doctest::Approx(-8.0));

  CHECK_THROWS_AS(bisector(Point{1, 2}, Point{1, 2}), Error);
}

TEST_CASE("vector helpers") {
  const Point x{1, 2, 3}, y{4, 6, 3};
  CHECK(dot(x, y) == doctest::Approx(25.0));
  CHECK(distance(x, y) == doctest::Approx(5.0));
  check_point(lerp(x, y, 0.5), midpoint(x, y));
  Point z = x;
  lerp_inplace(z, y, 1.0);
  check_point(z, y);
  CHECK(all_finite(x));
  CHECK_FALSE(all_finite(Point{1, NAN}));
}

// ---------------------------------------------------------------------------
// Properties on random inputs.

TEST_CASE("nearest_on_segment is no farther than either endpoint") {
  Rng rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t dim = 1 + rng.below(6);
    const Point x = rng.unit_vector(dim), y = rng.in_unit_ball(dim), z = rng.in_unit_ball(dim);
    const auto r = nearest_on_segment(x, y, z);
    CHECK(distance(x, r.point) <= std::min(distance(x, y), distance(x, z)) + 1e-12);
    CHECK(r.alpha >= 0.0);
    CHECK(r.alpha <= 1.0);
  }
}

TEST_CASE("closest_segment_points beats sampled parameter pairs") {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t dim = 2 + rng.below(4);
    const Point p = rng.in_unit_ball(dim), v = rng.in_unit_ball(dim);
    const Point q = rng.in_unit_ball(dim), w = rng.in_unit_ball(dim);
    const auto r = closest(p, v, q, w);
    for (int k = 0; k < 1000; ++k) {
      const double d = distance(lerp(p, v, rng.uniform()), lerp(q, w, rng.uniform()));
      REQUIRE(r.gap() <= d + 1e-12);
    }
  }
}

TEST_CASE("closest_segment_points is exactly symmetric") {
  Rng rng(13);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t dim = 1 + rng.below(5);
    const Point p = rng.in_unit_ball(dim), v = rng.in_unit_ball(dim);
    const Point q = rng.in_unit_ball(dim), w = rng.in_unit_ball(dim);
    const auto r = closest(p, v, q, w);
    const auto swapped = closest(q, w, p, v);
    REQUIRE(r.first == swapped.second);
    REQUIRE(r.second == swapped.first);
    REQUIRE(r.s == swapped.t);
    REQUIRE(r.t == swapped.s);
  }
}

TEST_CASE("bisector is equidistant") {
  Rng rng(14);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t dim = 1 + rng.below(8);
    Point p = rng.in_unit_ball(dim), q = rng.in_unit_ball(dim);
    for (auto& c : p) c *= 100.0;
    const Hyperplane h = bisector(p, q);
    CHECK(std::abs(std::abs(h.signed_distance(p)) - std::abs(h.signed_distance(q))) <= 1e-12 * distance(p, q));
  }
}
