#include "hullsep/smo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace hullsep {

namespace {

constexpr double kMinCurvature = -1e-12;
constexpr double kSparsityCutoff = 1e-8;

}  // namespace

LabeledProblem LabeledProblem::from_sets(const PointSet& a, const PointSet& b, double C) {
  std::vector<int> labels(a.size(), -1);
  labels.resize(a.size() + b.size(), +1);
  LabeledProblem problem{a.concat(b), std::move(labels), C};
  problem.validate();
  return problem;
}

void LabeledProblem::validate() const {
  if (labels.size() != points.size()) throw Error("labels and points differ in length");
  bool negative = false, positive = false;
  for (int y : labels) {
    if (y == -1)
      negative = true;
    else if (y == +1)
      positive = true;
    else
      throw Error("labels must be -1 or +1");
  }
  if (!negative || !positive) throw Error("both classes must be present");
  if (!(C > 0.0)) throw Error("C must be positive");
}

DualState DualState::initial(const LabeledProblem& problem) {
  DualState state;
  state.alphas.assign(problem.points.size(), 0.0);
  state.errors.resize(problem.points.size());
  for (std::size_t k = 0; k < state.errors.size(); ++k) state.errors[k] = -problem.labels[k];
  state.w.assign(problem.points.dim(), 0.0);
  return state;
}

void SmoOptions::validate() const {
  if (!(tol > 0.0)) throw Error("tol must be positive");
  if (max_iterations == 0) throw Error("max_iterations must be positive");
  if (attempts_per_point == 0) throw Error("attempts_per_point must be positive");
}

std::pair<double, double> compute_bounds(double alpha_i, double alpha_j, int y_i, int y_j, double C) {
  if (y_i != y_j) return {std::max(0.0, alpha_j - alpha_i), std::min(C, C + alpha_j - alpha_i)};
  return {std::max(0.0, alpha_i + alpha_j - C), std::min(C, alpha_i + alpha_j)};
}

double dual_objective(const DualState& state, const LabeledProblem& problem) {
  std::vector<std::size_t> support;
  double linear = 0.0;
  for (std::size_t i = 0; i < state.alphas.size(); ++i) {
    if (state.alphas[i] != 0.0) {
      support.push_back(i);
      linear += state.alphas[i];
    }
  }
  double quadratic = 0.0;
  for (std::size_t i : support) {
    for (std::size_t j : support) {
      quadratic += problem.labels[i] * problem.labels[j] * state.alphas[i] * state.alphas[j] *
                   dot(problem.points[i], problem.points[j]);
    }
  }
  return linear - 0.5 * quadratic;
}

std::vector<std::size_t> kkt_violations(const DualState& state, const LabeledProblem& problem, double tol) {
  Point w(problem.points.dim(), 0.0);
  for (std::size_t i = 0; i < state.alphas.size(); ++i) {
    if (state.alphas[i] == 0.0) continue;
    const double coef = state.alphas[i] * problem.labels[i];
    const PointView x = problem.points[i];
    for (std::size_t d = 0; d < w.size(); ++d) w[d] += coef * x[d];
  }
  std::vector<std::size_t> bad;
  for (std::size_t k = 0; k < state.alphas.size(); ++k) {
    const double margin = problem.labels[k] * (dot(w, problem.points[k]) + state.b);
    const double alpha = state.alphas[k];
    const bool ok = alpha == 0.0        ? margin >= 1.0 - tol
                    : alpha >= problem.C ? margin <= 1.0 + tol
                                         : std::abs(margin - 1.0) <= tol;
    if (!ok) bad.push_back(k);
  }
  return bad;
}

// ---------------------------------------------------------------------------

SmoSolver::SmoSolver(const LabeledProblem& problem, const SmoOptions& options)
    : problem_(problem),
      options_(options),
      state_(DualState::initial(problem)),
      gram_(problem.points, nullptr, options.gram_budget_bytes),
      rng_(options.seed) {
  problem_.validate();
  options_.validate();
}

bool SmoSolver::violates(std::size_t i) const {
  const double r = state_.errors[i] * problem_.labels[i];
  const double alpha = state_.alphas[i];
  return (r < -options_.tol && alpha < problem_.C) || (r > options_.tol && alpha > 0.0);
}

bool SmoSolver::out_of_attempts() const {
  return diverged_ || attempts_ >= options_.attempts_per_point * problem_.points.size();
}

bool SmoSolver::take_step(std::size_t i1, std::size_t i2) {
  if (i1 == i2) return false;
  ++attempts_;
  const int y1 = problem_.labels[i1];
  const int y2 = problem_.labels[i2];
  const double a1 = state_.alphas[i1];
  const double a2 = state_.alphas[i2];
  const double e1 = state_.errors[i1];
  const double e2 = state_.errors[i2];
  const double C = problem_.C;

  const auto [low, high] = compute_bounds(a1, a2, y1, y2, C);
  if (low == high) return false;

  const auto row1 = gram_.row(i1);
  const auto row2 = gram_.row(i2);
  const double k11 = (*row1)[i1];
  const double k12 = (*row1)[i2];
  const double k22 = (*row2)[i2];
  const double eta = 2.0 * k12 - k11 - k22;
  if (eta >= kMinCurvature) return false;

  double a2_new = std::clamp(a2 - y2 * (e1 - e2) / eta, low, high);
  const double eps = options_.step_epsilon;
  if (std::abs(a2_new - a2) < eps * (a2_new + a2 + eps)) return false;

  double a1_new = a1 + y1 * y2 * (a2 - a2_new);
  // Rounding can push the partner just outside its box.
  if (a1_new < 0.0) {
    a2_new += y1 * y2 * a1_new;
    a1_new = 0.0;
  } else if (a1_new > C) {
    a2_new += y1 * y2 * (a1_new - C);
    a1_new = C;
  }

  const double d1 = y1 * (a1_new - a1);
  const double d2 = y2 * (a2_new - a2);
  const double b1 = state_.b - e1 - d1 * k11 - d2 * k12;
  const double b2 = state_.b - e2 - d1 * k12 - d2 * k22;
  double b_new;
  if (a1_new > 0.0 && a1_new < C)
    b_new = b1;
  else if (a2_new > 0.0 && a2_new < C)
    b_new = b2;
  else
    b_new = 0.5 * (b1 + b2);
  const double db = b_new - state_.b;

  for (std::size_t k = 0; k < state_.errors.size(); ++k) state_.errors[k] += d1 * (*row1)[k] + d2 * (*row2)[k] + db;

  const PointView x1 = problem_.points[i1];
  const PointView x2 = problem_.points[i2];
  for (std::size_t d = 0; d < state_.w.size(); ++d) state_.w[d] += d1 * x1[d] + d2 * x2[d];

  alpha_sum_ += (a1_new - a1) + (a2_new - a2);
  state_.alphas[i1] = a1_new;
  state_.alphas[i2] = a2_new;
  state_.b = b_new;

  const double before = state_.objective;
  state_.objective = alpha_sum_ - 0.5 * squared_norm(state_.w);
  ++accepted_;
  if (!std::isfinite(state_.objective) || !std::isfinite(b_new)) diverged_ = true;
  if (options_.on_step) options_.on_step(SmoStepEvent{i1, i2, before, state_.objective, accepted_});
  return true;
}

int SmoSolver::examine_example(std::size_t i2) {
  if (!violates(i2)) return 0;
  const std::size_t n = problem_.points.size();
  const double e2 = state_.errors[i2];

  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < n; ++i)
    if (non_bound(i)) free.push_back(i);

  if (free.size() > 1) {
    std::size_t i1 = free.front();
    double best = -1.0;
    for (std::size_t i : free) {
      const double gap = std::abs(state_.errors[i] - e2);
      if (gap > best) {
        best = gap;
        i1 = i;
      }
    }
    if (take_step(i1, i2)) return 1;
  }

  if (!free.empty()) {
    const std::size_t start = rng_.below(free.size());
    for (std::size_t k = 0; k < free.size(); ++k) {
      if (out_of_attempts()) return 0;
      if (take_step(free[(start + k) % free.size()], i2)) return 1;
    }
  }

  const std::size_t start = rng_.below(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (out_of_attempts()) return 0;
    if (take_step((start + k) % n, i2)) return 1;
  }
  return 0;
}

SvmSolution SmoSolver::solve() {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = problem_.points.size();

  std::size_t sweeps = 0;
  std::size_t changed = 0;
  bool examine_all = true;
  bool converged = false;
  while (true) {
    if (changed == 0 && !examine_all) {
      converged = true;
      break;
    }
    if (sweeps >= options_.max_iterations || out_of_attempts()) break;
    changed = 0;
    for (std::size_t i = 0; i < n && !out_of_attempts(); ++i)
      if (examine_all || non_bound(i)) changed += examine_example(i);
    ++sweeps;
    if (examine_all)
      examine_all = false;
    else if (changed == 0)
      examine_all = true;
  }
  if (diverged_) converged = false;

  SvmSolution sol;
  sol.state = state_;
  sol.sweeps = sweeps;

  Point w(problem_.points.dim(), 0.0);
  double max_alpha = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double alpha = state_.alphas[i];
    max_alpha = std::max(max_alpha, alpha);
    if (alpha == 0.0) continue;
    const PointView x = problem_.points[i];
    for (std::size_t d = 0; d < w.size(); ++d) w[d] += alpha * problem_.labels[i] * x[d];
  }

  double top_negative = -kInfinity, bottom_positive = kInfinity, positive_mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = dot(w, problem_.points[i]);
    if (problem_.labels[i] < 0) {
      top_negative = std::max(top_negative, f);
    } else {
      bottom_positive = std::min(bottom_positive, f);
      positive_mass += state_.alphas[i];
    }
  }
  sol.b = -0.5 * (top_negative + bottom_positive);
  sol.w = w;

  SolveReport& report = sol.report;
  report.iterations = accepted_;
  for (double alpha : state_.alphas)
    if (alpha > kSparsityCutoff * max_alpha) ++report.sparsity;

  const double length = norm(w);
  if (length > 0.0 && std::isfinite(length)) {
    report.distance_lower = (bottom_positive - top_negative) / length;
    if (positive_mass > 0.0) report.distance_upper = length / positive_mass;
  }
  if (!converged)
    report.status = Status::MaxIterations;
  else if (report.distance_lower > 0.0)
    report.status = Status::Separated;
  else
    report.status = Status::Converged;
  if (report.status == Status::Separated)
    report.support_planes = std::pair{Hyperplane{w, top_negative}, Hyperplane{w, bottom_positive}};
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

SvmSolution smo_solve(const LabeledProblem& problem, const SmoOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  SmoSolver solver(problem, options);
  SvmSolution sol = solver.solve();
  sol.report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

}  // namespace hullsep
