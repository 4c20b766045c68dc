#pragma once

// Sequential minimal optimization for the linear-kernel SVM dual
//
//   max W(alpha) = sum alpha_i - 1/2 sum_ij y_i y_j alpha_i alpha_j x_i.x_j
//   s.t. 0 <= alpha_i <= C, sum alpha_i y_i = 0,
//
// with decision function f(x) = w.x + b and error cache E_k = f(x_k) - y_k.
// C may be infinite (hard margin).

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "hullsep/gram_cache.hpp"
#include "hullsep/instance.hpp"
#include "hullsep/point_set.hpp"
#include "hullsep/report.hpp"

namespace hullsep {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct LabeledProblem {
  PointSet points;
  std::vector<int> labels;  // -1 or +1
  double C = kInfinity;

  /// Points of `a` get label -1 and come first, points of `b` get +1.
  static LabeledProblem from_sets(const PointSet& a, const PointSet& b, double C = kInfinity);

  void validate() const;
};

struct DualState {
  std::vector<double> alphas;
  double b = 0.0;
  std::vector<double> errors;  // E_k for every k
  double objective = 0.0;      // W(alpha)
  Point w;                     // sum alpha_i y_i x_i, maintained incrementally

  static DualState initial(const LabeledProblem& problem);
};

struct SmoStepEvent {
  std::size_t i1 = 0;
  std::size_t i2 = 0;
  double objective_before = 0.0;
  double objective_after = 0.0;
  std::size_t step = 0;
};

struct SmoOptions {
  double tol = 1e-3;
  /// Cap on main-loop sweeps.
  std::size_t max_iterations = 10000;
  /// Cap on take_step attempts, as a multiple of the number of points.
  std::size_t attempts_per_point = 10000;
  std::uint64_t seed = 1;
  /// Relative change of alpha_2 below which a step is rejected.
  double step_epsilon = 1e-12;
  std::size_t gram_budget_bytes = std::size_t{256} << 20;

  std::function<void(const SmoStepEvent&)> on_step;

  void validate() const;
};

struct SvmSolution {
  Point w;
  double b = 0.0;  // centered between the two classes along w
  DualState state;
  SolveReport report;
  std::size_t sweeps = 0;

  const std::vector<double>& alphas() const { return state.alphas; }
};

/// Feasible interval for alpha_j when (alpha_i, alpha_j) moves along the
/// constraint line.
std::pair<double, double> compute_bounds(double alpha_i, double alpha_j, int y_i, int y_j, double C);

/// Dual objective by the double sum over nonzero alphas.
double dual_objective(const DualState& state, const LabeledProblem& problem);

/// Indices whose margin y_k f(x_k) breaks the optimality conditions by more
/// than tol, recomputed from alphas and b.
std::vector<std::size_t> kkt_violations(const DualState& state, const LabeledProblem& problem, double tol);

class SmoSolver {
 public:
  SmoSolver(const LabeledProblem& problem, const SmoOptions& options = {});

  const DualState& state() const { return state_; }
  std::size_t accepted_steps() const { return accepted_; }
  std::size_t attempts() const { return attempts_; }

  /// Jointly optimizes alpha_i1 and alpha_i2; false when no progress is possible.
  bool take_step(std::size_t i1, std::size_t i2);
  /// Looks for a partner of i2 when i2 violates the optimality conditions.
  int examine_example(std::size_t i2);

  SvmSolution solve();

 private:
  bool violates(std::size_t i) const;
  bool non_bound(std::size_t i) const { return state_.alphas[i] > 0.0 && state_.alphas[i] < problem_.C; }
  bool out_of_attempts() const;

  const LabeledProblem& problem_;
  SmoOptions options_;
  DualState state_;
  GramRowCache gram_;
  Rng rng_;
  double alpha_sum_ = 0.0;
  std::size_t accepted_ = 0;
  std::size_t attempts_ = 0;
  bool diverged_ = false;
};

SvmSolution smo_solve(const LabeledProblem& problem, const SmoOptions& options = {});

}  // namespace hullsep
