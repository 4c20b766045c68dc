#pragma once

// Experiment runner behind `hullsep bench`: seeded two-ball instances, one
// row per (instance, algorithm) run.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hullsep/point_set.hpp"
#include "hullsep/report.hpp"
#include "hullsep/smo.hpp"
#include "hullsep/triangle.hpp"

namespace hullsep {

enum class Algorithm { TA, SMO };

std::string_view algorithm_name(Algorithm algo);
Algorithm parse_algorithm(std::string_view text);

struct ExperimentRow {
  std::string suite;
  std::size_t dim = 0;
  std::size_t na = 0;
  std::size_t nb = 0;
  double factor = 0.0;
  std::uint64_t seed = 0;
  Algorithm algo = Algorithm::TA;
  std::size_t iterations = 0;
  double time_s = 0.0;
  double distance = 0.0;
  std::size_t sparsity = 0;
  Status status = Status::MaxIterations;
};

inline constexpr std::string_view kCsvHeader = "suite,dim,na,nb,factor,seed,algo,iters,time_s,distance,sparsity,status";

std::string csv_line(const ExperimentRow& row);
void write_rows(std::ostream& out, const std::vector<ExperimentRow>& rows);

/// Settings shared by single runs and suites.
struct SolverSettings {
  double epsilon = 1e-3;
  double tol = 1e-3;
  double C = kInfinity;
  std::size_t max_iterations = 10000;
  TriangleOptions triangle;  // epsilon and max_iterations are overwritten

  TriangleOptions triangle_options() const;
  SmoOptions smo_options(std::uint64_t seed) const;
};

/// Result of one solver run, with the distance measured along the solver's
/// final normal: p' - p for the Triangle Algorithm, w for SMO.
struct RunOutcome {
  SolveReport report;
  double distance = 0.0;
};

/// TA: phase I then phase II. Phase I only when `intersection_only`.
RunOutcome run_triangle(const PointSet& a, const PointSet& b, const SolverSettings& settings,
                        bool intersection_only = false);
RunOutcome run_smo(const PointSet& a, const PointSet& b, const SolverSettings& settings, std::uint64_t seed);

enum class Suite { Dimension, Distance, Intersection };

std::string_view suite_name(Suite suite);
Suite parse_suite(std::string_view text);

struct BenchConfig {
  Suite suite = Suite::Dimension;
  std::vector<std::size_t> dims;  // dimension and intersection suites
  std::size_t dim = 0;            // distance suite
  std::vector<double> ks;         // distance suite: factor = 1 - k
  std::size_t na = 0;
  std::size_t nb = 0;
  double factor = 0.0;  // dimension and intersection suites
  std::size_t seeds = 3;
  std::uint64_t base_seed = 1;
  std::size_t jobs = 1;
  SolverSettings settings;

  /// Desk-scale defaults of a suite.
  static BenchConfig defaults(Suite suite);
  void validate() const;
};

/// Runs every instance of the suite. Rows come back in a fixed order
/// (instance order, TA before SMO) whatever the number of jobs.
std::vector<ExperimentRow> run_bench(const BenchConfig& config);

/// Mean iterations, time, distance and sparsity per (dim, factor, algo).
void write_summary(std::ostream& out, const std::vector<ExperimentRow>& rows);

}  // namespace hullsep
