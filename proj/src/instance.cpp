#include "hullsep/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hullsep {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = uniform(-1.0, 1.0);
    v = uniform(-1.0, 1.0);
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * scale;
  has_spare_ = true;
  return u * scale;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw Error("Rng::below needs a positive bound");
  // Rejection keeps the result unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

Point Rng::unit_vector(std::size_t dim) {
  Point v(dim);
  double len2 = 0.0;
  do {
    for (double& x : v) x = normal();
    len2 = squared_norm(v);
  } while (len2 == 0.0);
  const double inv = 1.0 / std::sqrt(len2);
  for (double& x : v) x *= inv;
  return v;
}

Point Rng::in_unit_ball(std::size_t dim) {
  Point v = unit_vector(dim);
  const double radius = std::pow(uniform(), 1.0 / static_cast<double>(dim));
  for (double& x : v) x *= radius;
  return v;
}

void InstanceSpec::validate() const {
  if (dim == 0) throw Error("dimension must be positive");
  if (na == 0 || nb == 0) throw Error("both point counts must be positive");
  if (!(translation_factor >= 0.0) || !std::isfinite(translation_factor))
    throw Error("translation factor must be a finite non-negative number");
}

TwoBallInstance generate_two_balls(const InstanceSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);

  Point center(spec.dim);
  for (double& c : center) c = rng.uniform(-1.0, 1.0);

  auto sample = [&](std::size_t count) {
    std::vector<double> coords;
    coords.reserve(count * spec.dim);
    for (std::size_t i = 0; i < count; ++i) {
      const Point u = rng.in_unit_ball(spec.dim);
      for (std::size_t k = 0; k < spec.dim; ++k) coords.push_back(center[k] + u[k]);
    }
    return PointSet(spec.dim, std::move(coords));
  };

  PointSet a = sample(spec.na);
  PointSet b0 = sample(spec.nb);
  Point direction = rng.unit_vector(spec.dim);

  const double max_diam = std::max(diameter(a), diameter(b0));
  const double shift = spec.translation_factor * max_diam;
  Point offset(spec.dim);
  for (std::size_t k = 0; k < spec.dim; ++k) offset[k] = shift * direction[k];

  Point center_b(spec.dim);
  for (std::size_t k = 0; k < spec.dim; ++k) center_b[k] = center[k] + offset[k];

  return TwoBallInstance{std::move(a), b0.translated(offset), center, std::move(center_b),
                         std::move(direction), max_diam, shift};
}

}  // namespace hullsep
