#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>

#include "hullsep/geometry.hpp"

namespace hullsep {

enum class Status {
  Intersecting,   // an epsilon-approximate common point was found
  Separated,      // disjoint hulls, certified by a separating hyperplane
  MaxIterations,  // iteration budget exhausted
  Converged,      // soft-margin SVM optimum whose hyperplane does not separate
};

std::string_view status_name(Status status);

struct SolveReport {
  Status status = Status::MaxIterations;
  std::size_t iterations = 0;
  double wall_time = 0.0;  // seconds, solve only
  double distance_upper = 0.0;
  double distance_lower = 0.0;
  /// Points with a nonzero weight in the returned solution.
  std::size_t sparsity = 0;
  /// Parallel planes supporting the first and the second set.
  std::optional<std::pair<Hyperplane, Hyperplane>> support_planes;
};

}  // namespace hullsep
