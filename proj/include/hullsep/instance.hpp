#pragma once

#include <cstdint>
#include <random>

#include "hullsep/point_set.hpp"

namespace hullsep {

/// Seedable 64-bit generator with platform-independent output.
///
/// The engine is std::mt19937_64, whose sequence is fixed by the standard.
/// The distributions are implemented here because the standard library ones
/// are allowed to differ between vendors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Marsaglia polar method).
  double normal();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  /// Uniform direction on the unit sphere in R^dim.
  Point unit_vector(std::size_t dim);
  /// Uniform sample from the unit ball in R^dim.
  Point in_unit_ball(std::size_t dim);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct InstanceSpec {
  std::size_t dim = 2;
  std::size_t na = 100;
  std::size_t nb = 100;
  /// The second set is shifted by translation_factor * max(diam A, diam B).
  double translation_factor = 1.1;
  std::uint64_t seed = 1;

  void validate() const;
};

struct TwoBallInstance {
  PointSet a;
  PointSet b;
  Point center_a;
  Point center_b;  // after translation
  Point direction;
  double max_diameter = 0.0;
  double shift = 0.0;  // translation_factor * max_diameter
};

/// Two samples from a unit ball around one seeded random center; the second
/// sample is then moved along a seeded random unit direction.
TwoBallInstance generate_two_balls(const InstanceSpec& spec);

}  // namespace hullsep
