#include "doctest.h"

#include <cmath>

#include "hullsep/instance.hpp"
#include "hullsep/oracle.hpp"
#include "hullsep/triangle.hpp"

using namespace hullsep;

namespace {

constexpr OracleMethod kMethods[] = {OracleMethod::MinkowskiNearestPoint, OracleMethod::AlternatingProjection,
                                     OracleMethod::GridEnum};

TwoBallInstance instance(std::size_t dim, std::size_t n, double factor, std::uint64_t seed) {
  InstanceSpec spec;
  spec.dim = dim;
  spec.na = spec.nb = n;
  spec.translation_factor = factor;
  spec.seed = seed;
  return generate_two_balls(spec);
}

}  // namespace

TEST_CASE("brute_force_distance examples") {
  const PointSet s = PointSet::from_rows({{0, 0}}), t = PointSet::from_rows({{2, 0}});
  const PointSet a = PointSet::from_rows({{0, 0}, {0, 1}}), b = PointSet::from_rows({{3, 0}, {3, 1}});
  const PointSet u = PointSet::from_rows({{-1}, {1}}), v = PointSet::from_rows({{0}});
  for (OracleMethod m : kMethods) {
    CAPTURE(method_name(m));
    CHECK(brute_force_distance(s, t, m).delta_star == doctest::Approx(2.0));
    CHECK(brute_force_distance(a, b, m).delta_star == doctest::Approx(3.0));
    CHECK(brute_force_distance(u, v, m).delta_star == doctest::Approx(0.0));
  }
}

TEST_CASE("oracle results are consistent") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto inst = instance(2 + seed % 2, 4, seed % 2 ? 1.1 : 0.4, seed);
    const OracleResult exact = brute_force_distance(inst.a, inst.b);
    CHECK(exact.delta_star == doctest::Approx(distance(exact.a.point(), exact.b.point())));
    CHECK(exact.lower_bound <= exact.delta_star + 1e-12);
    for (OracleMethod m : kMethods) {
      CAPTURE(method_name(m));
      const OracleResult r = brute_force_distance(inst.a, inst.b, m, 16);
      CHECK(r.method == m);
      CHECK(std::abs(r.delta_star - exact.delta_star) <= r.error_bound + exact.error_bound);
      CHECK(r.lower_bound <= exact.delta_star + 1e-9);
    }
  }
}

TEST_CASE("min_norm_weights") {
  const std::vector<double> w = min_norm_weights({{1, 1}, {1, -1}, {3, 0}});
  REQUIRE(w.size() == 3);
  CHECK(w[0] == doctest::Approx(0.5));
  CHECK(w[1] == doctest::Approx(0.5));
  CHECK(w[2] == doctest::Approx(0.0));
  const std::vector<double> z = min_norm_weights({{-1, 0}, {1, 0}, {0, 5}});
  CHECK(z[0] == doctest::Approx(0.5));
  CHECK(z[2] == doctest::Approx(0.0));
}

TEST_CASE("grid refinement stays within the grid bound") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto inst = instance(2, 3, 0.6, seed);
    const double diam = std::max(diameter(inst.a), diameter(inst.b));
    for (std::size_t r : {8, 16, 32}) {
      const double fine = brute_force_distance(inst.a, inst.b, OracleMethod::GridEnum, r).delta_star;
      const double coarse = brute_force_distance(inst.a, inst.b, OracleMethod::GridEnum, r / 2).delta_star;
      CHECK(coarse >= fine - 1e-12);
      CHECK(coarse - fine <= diam / r);
    }
  }
}

TEST_CASE("grid enumeration refuses oversized inputs") {
  const auto inst = instance(3, 200, 1.1, 1);
  CHECK_THROWS_AS(brute_force_distance(inst.a, inst.b, OracleMethod::GridEnum), Error);
}

TEST_CASE("check_separation examples") {
  const PointSet s = PointSet::from_rows({{0, 0}}), t = PointSet::from_rows({{2, 0}});
  CHECK(check_separation(bisector(s[0], t[0]), s, t, 1e-9));
  CHECK(check_separation(bisector(t[0], s[0]), s, t, 1e-9));

  const PointSet u = PointSet::from_rows({{-1, 0}, {1, 0}}), v = PointSet::from_rows({{0, -1}, {0, 1}});
  for (const Point& n : {Point{1, 0}, Point{0, 1}, Point{1, 1}, Point{-2, 1}})
    for (double off : {-0.5, 0.0, 0.5}) CHECK_FALSE(check_separation(Hyperplane{n, off}, u, v, 1e-9));

  // Plane x = 1 passes through the vertex (1, 0).
  const PointSet a = PointSet::from_rows({{0, 0}, {1, 0}}), b = PointSet::from_rows({{2, 0}});
  const Hyperplane h{Point{1, 0}, 1.0};
  CHECK_FALSE(check_separation(h, a, b, 0.0));
  CHECK(check_separation(h, a, b, 1e-6));
}

TEST_CASE("reported_distance examples") {
  const PointSet a = PointSet::from_rows({{0}}), b = PointSet::from_rows({{2}});
  CHECK(reported_distance(Point{1}, -1.0, a, b) == doctest::Approx(2.0));
  CHECK(reported_distance(Point{10}, -10.0, a, b) == doctest::Approx(2.0));
  CHECK(reported_distance(Point{-1}, 0.0, a, b) < 0.0);
  CHECK_THROWS_AS(reported_distance(Point{0}, 0.0, a, b), Error);
}

TEST_CASE("reported distance never exceeds the true distance") {
  Rng rng(4);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto inst = instance(3, 8, 1.1, seed);
    const double star = brute_force_distance(inst.a, inst.b).delta_star;
    for (int k = 0; k < 50; ++k)
      CHECK(reported_distance(rng.unit_vector(3), rng.normal(), inst.a, inst.b) <= star + 1e-9);
  }
}

TEST_CASE("every TA witness passes check_separation") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = instance(2 + seed % 6, 30, 1.1, seed);
    const Ta1Result r = ta1_solve(inst.a, inst.b);
    REQUIRE(r.witness);
    CHECK(check_separation(r.witness->bisector, inst.a, inst.b, 1e-9));
  }
}
