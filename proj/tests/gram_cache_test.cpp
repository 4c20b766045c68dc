#include "doctest.h"

#include "hullsep/gram_cache.hpp"
#include "hullsep/instance.hpp"

using namespace hullsep;

TEST_CASE("gram rows match direct products") {
  Rng rng(2);
  std::vector<Point> ra, rb;
  for (int i = 0; i < 20; ++i) ra.push_back(rng.in_unit_ball(4));
  for (int i = 0; i < 15; ++i) rb.push_back(rng.in_unit_ball(4));
  const PointSet a = PointSet::from_rows(ra), b = PointSet::from_rows(rb);
  GramRowCache cache(a, &b, std::size_t{1} << 20);
  REQUIRE(cache.size() == 35);
  for (std::size_t i = 0; i < cache.size(); ++i) {
    const auto row = cache.row(i);
    REQUIRE(row->size() == 35);
    for (std::size_t j = 0; j < cache.size(); ++j)
      CHECK((*row)[j] == doctest::Approx(dot(cache.point(i), cache.point(j))));
  }
  cache.row(3);
  CHECK(cache.rows_computed() == 35);
}

TEST_CASE("gram cache evicts least recently used rows") {
  const PointSet a = PointSet::from_rows({{1}, {2}, {3}, {4}});
  // Room for two rows of four doubles.
  GramRowCache cache(a, nullptr, 2 * 4 * sizeof(double));
  CHECK(cache.capacity_rows() == 2);
  const auto held = cache.row(0);
  cache.row(1);
  cache.row(2);
  CHECK(cache.resident_rows() == 2);
  CHECK((*held)[3] == 4.0);  // still valid after eviction
  cache.row(0);
  CHECK(cache.rows_computed() == 4);
  cache.row(2);
  CHECK(cache.rows_computed() == 4);
}
