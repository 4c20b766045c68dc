#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "hullsep/instance.hpp"
#include "hullsep/oracle.hpp"
#include "hullsep/triangle.hpp"

using namespace hullsep;

namespace {

TwoBallInstance instance(std::size_t dim, std::size_t n, double factor, std::uint64_t seed) {
  InstanceSpec spec;
  spec.dim = dim;
  spec.na = spec.nb = n;
  spec.translation_factor = factor;
  spec.seed = seed;
  return generate_two_balls(spec);
}

WitnessCertificate certificate(const PointSet& a, std::size_t i, const PointSet& b, std::size_t j) {
  ConvexIterate p = ConvexIterate::vertex(a, i), q = ConvexIterate::vertex(b, j);
  Hyperplane h = bisector(p.point(), q.point());
  return {std::move(p), std::move(q), std::move(h)};
}

}  // namespace

TEST_CASE("find_pivot: pivot in the first set") {
  const PointSet a = PointSet::from_rows({{3, 0}, {0, 0}});
  const PointSet b = PointSet::from_rows({{4, 0}});
  const auto r = find_pivot(ConvexIterate::vertex(a, 1), ConvexIterate::vertex(b, 0));
  CHECK(r.kind == PivotKind::InA);
  CHECK(r.index == 0);
}

TEST_CASE("find_pivot: no pivot on either side") {
  const PointSet a = PointSet::from_rows({{-1, 0}, {1, 0}});
  const PointSet b = PointSet::from_rows({{4, 0}});
  const auto r = find_pivot(ConvexIterate::centroid(a), ConvexIterate::vertex(b, 0));
  CHECK(r.kind == PivotKind::None);
}

TEST_CASE("find_pivot: equality counts as a pivot") {
  const PointSet a = PointSet::from_rows({{2, 3}, {-2, -3}});
  const PointSet b = PointSet::from_rows({{4, 0}});
  const auto r = find_pivot(ConvexIterate::centroid(a), ConvexIterate::vertex(b, 0));
  CHECK(r.kind == PivotKind::InA);
  CHECK(r.index == 0);
}

TEST_CASE("find_pivot: pivot in the second set") {
  const PointSet a = PointSet::from_rows({{0, 0}});
  const PointSet b = PointSet::from_rows({{4, 0}, {-1, 0}});
  const auto r = find_pivot(ConvexIterate::vertex(a, 0), ConvexIterate::vertex(b, 0));
  CHECK(r.kind == PivotKind::InB);
  CHECK(r.index == 1);
}

TEST_CASE("find_pivot: the filter never changes the answer") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto inst = instance(3, 40, seed % 2 ? 0.3 : 1.1, seed);
    Rng rng(seed);
    ConvexIterate p = ConvexIterate::centroid(inst.a), q = ConvexIterate::centroid(inst.b);
    p.step_toward_vertex(rng.below(40), 0.5);
    q.step_toward_vertex(rng.below(40), 0.5);
    const PivotFilter filter = nonbounding_candidates(p, q);
    const auto plain = find_pivot(p, q);
    const auto filtered = find_pivot(p, q, &filter);
    CHECK(plain.kind == filtered.kind);
    if (plain.kind != PivotKind::None) CHECK(plain.index == filtered.index);
  }
}

TEST_CASE("support_extremes examples") {
  const PointSet a = PointSet::from_rows({{0, 0}, {0, 1}});
  const PointSet b = PointSet::from_rows({{3, 0}, {3, 1}});
  CHECK(support_extremes(Point{-3, 0}, a, b).delta_lower == doctest::Approx(3.0));
  CHECK(support_extremes(Point{0, 1}, a, b).delta_lower <= 0.0);

  const PointSet s = PointSet::from_rows({{0, 0}});
  const PointSet t = PointSet::from_rows({{3, 4}});
  CHECK(support_extremes(Point{-3, -4}, s, t).delta_lower == doctest::Approx(5.0));
  CHECK(support_extremes(Point{-1, 0}, s, t).delta_lower == doctest::Approx(3.0));
}

TEST_CASE("ta1: singletons give a witness without any step") {
  const PointSet a = PointSet::from_rows({{0, 0}});
  const PointSet b = PointSet::from_rows({{2, 0}});
  const Ta1Result r = ta1_solve(a, b);
  CHECK(r.report.status == Status::Separated);
  CHECK(r.report.iterations == 0);
  REQUIRE(r.witness);
  CHECK(r.witness->a.point()[0] == 0.0);
  CHECK(r.witness->b.point()[0] == 2.0);
  CHECK(witness_holds(*r.witness));
  const Hyperplane& h = r.witness->bisector;
  CHECK(h.side(Point{1, 5}) == doctest::Approx(0.0));
}

TEST_CASE("ta1: one pivot step lands on the other set") {
  const PointSet a = PointSet::from_rows({{-1}, {1}});
  const PointSet b = PointSet::from_rows({{0}});
  const Ta1Result r = ta1_solve(a, b, {}, ConvexIterate::vertex(a, 0));
  CHECK(r.report.status == Status::Intersecting);
  CHECK(r.report.iterations == 1);
  CHECK(r.a.point()[0] == doctest::Approx(0.0));
  CHECK(distance(r.a.point(), r.b.point()) == doctest::Approx(0.0));
  CHECK(r.a.coefficients()[1] == doctest::Approx(0.5));
  CHECK_FALSE(r.witness);
}

TEST_CASE("ta1: overlapping balls intersect") {
  const auto inst = instance(2, 50, 0.0, 1);
  const Ta1Result r = ta1_solve(inst.a, inst.b);
  CHECK(r.report.status == Status::Intersecting);
  CHECK(brute_force_distance(inst.a, inst.b).delta_star < 1e-9);
}

TEST_CASE("ta1: iteration budget") {
  const auto inst = instance(20, 200, 0.1, 4);
  TriangleOptions opts;
  opts.max_iterations = 1;
  const Ta1Result r = ta1_solve(inst.a, inst.b, opts);
  CHECK(r.report.status == Status::MaxIterations);
  CHECK(r.report.iterations == 1);
}

TEST_CASE("ta2: parallel faces stop at once") {
  const PointSet a = PointSet::from_rows({{0, 0}, {0, 1}});
  const PointSet b = PointSet::from_rows({{3, 0}, {3, 1}});
  const Ta2Result r = ta2_solve(certificate(a, 0, b, 0));
  CHECK(r.report.status == Status::Separated);
  CHECK(r.report.iterations == 0);
  CHECK(r.gap.delta == doctest::Approx(3.0));
  CHECK(r.gap.delta_lower == doctest::Approx(3.0));
  CHECK(r.gap.error == doctest::Approx(0.0).epsilon(1e-12));
  REQUIRE(r.report.support_planes);
  const auto& [ha, hb] = *r.report.support_planes;
  CHECK(ha.signed_distance(Point{0, 7}) == doctest::Approx(0.0));
  CHECK(hb.signed_distance(Point{3, -2}) == doctest::Approx(0.0));
}

TEST_CASE("ta2: singletons") {
  for (double d : {0.5, 2.0, 1e3}) {
    const PointSet a = PointSet::from_rows({{0, 0}});
    const PointSet b = PointSet::from_rows({{d, 0}});
    const Ta2Result r = ta2_solve(certificate(a, 0, b, 0));
    CHECK(r.report.distance_upper == doctest::Approx(d));
    CHECK(r.report.distance_lower == doctest::Approx(d));
  }
}

TEST_CASE("ta2: rejects a pair that does not separate") {
  const PointSet a = PointSet::from_rows({{-1}, {1}});
  const PointSet b = PointSet::from_rows({{0}, {3}});
  CHECK_THROWS_AS(ta2_solve(certificate(a, 0, b, 1)), Error);
}

TEST_CASE("ta2: random separable instance against the oracle") {
  const auto inst = instance(5, 20, 1.1, 3);
  const DistanceResult r = ta_distance(inst.a, inst.b);
  REQUIRE(r.report.status == Status::Separated);
  const double star = brute_force_distance(inst.a, inst.b).delta_star;
  CHECK(std::abs(r.report.distance_upper - star) <= std::max(1e-3 * r.report.distance_upper, 1e-2));
  CHECK(r.report.distance_lower <= star + 1e-9);
  CHECK(star <= r.report.distance_upper + 1e-9);
}

TEST_CASE("joint_step reproduces the segment examples") {
  const JointStep j = joint_step(Point{0, 0}, Point{2, 0}, Point{1, 1}, Point{1, 3});
  CHECK(j.a[0] == doctest::Approx(1.0));
  CHECK(j.b[1] == doctest::Approx(1.0));
  CHECK(distance(j.a, j.b) == doctest::Approx(1.0));

  const JointStep k = joint_step(Point{0}, Point{2}, Point{1.5}, Point{-1});
  CHECK(distance(k.a, k.b) == doctest::Approx(0.0));
}

TEST_CASE("joint_step is never worse than a single step") {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 2 + rng.below(5);
    const Point a = rng.in_unit_ball(dim), va = rng.in_unit_ball(dim);
    const Point b = rng.in_unit_ball(dim), vb = rng.in_unit_ball(dim);
    const JointStep j = joint_step(a, va, b, vb);
    const double single = std::min(distance(nearest_on_segment(b, a, va).point, b),
                                   distance(nearest_on_segment(a, b, vb).point, a));
    CHECK(distance(j.a, j.b) <= single + 1e-12);
    CHECK(j.s >= 0.0);
    CHECK(j.s <= 1.0);
    CHECK(j.t >= 0.0);
    CHECK(j.t <= 1.0);
  }
}

TEST_CASE("DotCache updates") {
  Rng rng(31);
  std::vector<Point> rows;
  for (int i = 0; i < 30; ++i) rows.push_back(rng.in_unit_ball(5));
  const PointSet v = PointSet::from_rows(rows);
  auto column = [&](std::size_t j) { return v[j]; };
  auto row_of = [&](std::size_t j) {
    std::vector<double> r(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) r[k] = dot(v[j], v[k]);
    return r;
  };

  Point a = v.rows()[0], b = v.rows()[1];
  DotCache cache(a, b, v.size(), column);

  SUBCASE("alpha = 0 leaves the cache unchanged") {
    const DotCache before = cache;
    cache.step(Side::A, 0.0, 4, row_of(4));
    for (std::size_t j = 0; j < v.size(); ++j) CHECK(cache.dot(Side::A, j) == before.dot(Side::A, j));
    CHECK(cache.squared_norm(Side::A) == before.squared_norm(Side::A));
    CHECK(cache.cross() == before.cross());
  }

  SUBCASE("alpha = 1 copies the pivot row") {
    const auto row = row_of(7);
    cache.step(Side::B, 1.0, 7, row);
    for (std::size_t j = 0; j < v.size(); ++j) CHECK(cache.dot(Side::B, j) == doctest::Approx(row[j]));
    CHECK(cache.squared_norm(Side::B) == doctest::Approx(v.squared_norm(7)));
    CHECK(cache.cross() == doctest::Approx(dot(a, v[7])));
  }

  SUBCASE("drift over many random steps") {
    for (int k = 0; k < 10000; ++k) {
      const Side s = rng.below(2) ? Side::A : Side::B;
      const std::size_t j = rng.below(v.size());
      const double alpha = rng.uniform();
      cache.step(s, alpha, j, row_of(j));
      lerp_inplace(s == Side::A ? std::span<double>(a) : std::span<double>(b), v[j], alpha);
    }
    double worst = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      worst = std::max(worst, std::abs(cache.dot(Side::A, j) - dot(a, v[j])));
      worst = std::max(worst, std::abs(cache.dot(Side::B, j) - dot(b, v[j])));
    }
    worst = std::max(worst, std::abs(cache.squared_norm(Side::A) - squared_norm(a)));
    worst = std::max(worst, std::abs(cache.squared_norm(Side::B) - squared_norm(b)));
    worst = std::max(worst, std::abs(cache.cross() - dot(a, b)));
    CHECK(worst <= 1e-9);
  }

  SUBCASE("added columns") {
    cache.add_column(1.5, -2.0);
    CHECK(cache.columns() == v.size() + 1);
    CHECK(cache.dot(Side::A, v.size()) == 1.5);
    CHECK(cache.dot(Side::B, v.size()) == -2.0);
  }
}

TEST_CASE("ZigzagGuard") {
  const VertexRef v1{Side::A, 1}, v2{Side::A, 2}, w{Side::B, 0};

  SUBCASE("fast progress") {
    ZigzagGuard guard(8, 1e-3);
    double gap = 1.0;
    for (int k = 0; k < 20; ++k) {
      const VertexRef pivot[] = {k % 2 ? v1 : v2};
      guard.record(gap, gap * 0.9, pivot);
      gap *= 0.9;
    }
    CHECK_FALSE(guard.detect());
  }

  SUBCASE("alternating pivots with a stalled gap") {
    ZigzagGuard guard(8, 1e-3);
    double gap = 1.0;
    for (int k = 0; k < 8; ++k) {
      const VertexRef pivot[] = {k % 2 ? v1 : v2};
      guard.record(gap, gap - 1e-6, pivot);
      gap -= 1e-6;
      if (k < 7) CHECK_FALSE(guard.detect());
    }
    const auto hit = guard.detect();
    REQUIRE(hit);
    CHECK(((hit->first == v1 && hit->second == v2) || (hit->first == v2 && hit->second == v1)));
    guard.clear();
    CHECK_FALSE(guard.detect());
  }

  SUBCASE("one vertex alone is not a zig-zag") {
    ZigzagGuard guard(4, 1e-3);
    for (int k = 0; k < 4; ++k) {
      const VertexRef pivot[] = {w};
      guard.record(1.0, 1.0, pivot);
    }
    CHECK_FALSE(guard.detect());
  }

  CHECK_THROWS_AS(ZigzagGuard(1, 1e-3), Error);
}

TEST_CASE("midpoint_combination") {
  const Combination m = midpoint_combination({{1, 1.0}}, {{2, 1.0}});
  REQUIRE(m.size() == 2);
  CHECK(m[0] == std::pair<std::size_t, double>{1, 0.5});
  CHECK(m[1] == std::pair<std::size_t, double>{2, 0.5});

  const Combination n = midpoint_combination({{0, 0.5}, {1, 0.5}}, {{1, 1.0}});
  CHECK(n[1].second == doctest::Approx(0.75));
}

// ---------------------------------------------------------------------------
// Solver properties over random instances.

TEST_CASE("gap never grows and coefficients stay convex") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const auto inst = instance(2 + seed % 4, 60, seed % 3 == 0 ? 0.0 : 1.1, seed);
    TriangleOptions opts;
    std::size_t steps = 0, bad = 0;
    opts.on_step = [&](const StepEvent& e) {
      ++steps;
      if (e.gap_after > e.gap_before * (1 + 1e-12) + 1e-15) ++bad;
    };
    const DistanceResult r = ta_distance(inst.a, inst.b, opts);
    CHECK(bad == 0);
    CHECK(steps > 0);
    for (const ConvexIterate* c : {&r.a, &r.b}) {
      CHECK(c->coefficient_sum() == doctest::Approx(1.0).epsilon(1e-12));
      for (double w : c->coefficients()) CHECK(w >= 0.0);
      CHECK(c->resynthesis_error() <= 1e-8 * std::max(1.0, diameter(c->set())));
    }
  }
}

TEST_CASE("witnesses hold and separated runs meet the stop rule") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const auto inst = instance(2 + seed % 5, 80, 1.1, 100 + seed);
    TriangleOptions opts;
    const DistanceResult r = ta_distance(inst.a, inst.b, opts);
    REQUIRE(r.report.status == Status::Separated);
    REQUIRE(r.witness);
    CHECK(witness_holds(*r.witness));
    REQUIRE(r.gap);
    const GapEstimate& g = *r.gap;
    CHECK(g.delta_lower <= g.delta * (1 + 1e-12));
    const double noise = 1e-12 * (1.0 + inst.a.max_norm() + inst.b.max_norm());
    CHECK(g.error <= opts.epsilon * std::max(g.rho_a, g.rho_b) + noise);
    const double star = brute_force_distance(inst.a, inst.b).delta_star;
    CHECK(g.delta_lower - 1e-9 <= star);
    CHECK(star <= g.delta + 1e-9);
  }
}

TEST_CASE("intersecting runs stop close to the last pivot") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto inst = instance(3, 60, 0.0, seed);
    const Ta1Result r = ta1_solve(inst.a, inst.b);
    REQUIRE(r.report.status == Status::Intersecting);
    CHECK(r.report.distance_upper <= 1e-3 * 2.0 * (inst.a.max_norm() + inst.b.max_norm()));
  }
}

TEST_CASE("cache toggle leaves results unchanged") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto inst = instance(2 + seed % 3, 30, seed % 2 ? 0.0 : 1.1, seed);
    TriangleOptions on, off;
    off.use_cache = false;
    const DistanceResult x = ta_distance(inst.a, inst.b, on);
    const DistanceResult y = ta_distance(inst.a, inst.b, off);
    CHECK(x.report.status == y.report.status);
    CHECK(x.report.distance_upper == doctest::Approx(y.report.distance_upper).epsilon(1e-9));
  }
}

TEST_CASE("options validation") {
  TriangleOptions opts;
  opts.epsilon = 0.0;
  CHECK_THROWS_AS(opts.validate(), Error);
  opts.epsilon = 1.0;
  CHECK_THROWS_AS(opts.validate(), Error);
  const PointSet a = PointSet::from_rows({{0, 0}});
  const PointSet b = PointSet::from_rows({{0, 0, 1}});
  CHECK_THROWS_AS(ta1_solve(a, b), Error);
}
