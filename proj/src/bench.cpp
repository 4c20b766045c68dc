#include "hullsep/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>
#include <tuple>

#include "hullsep/csv.hpp"
#include "hullsep/instance.hpp"
#include "hullsep/oracle.hpp"

namespace hullsep {

std::string_view algorithm_name(Algorithm algo) { return algo == Algorithm::TA ? "ta" : "smo"; }

Algorithm parse_algorithm(std::string_view text) {
  if (text == "ta") return Algorithm::TA;
  if (text == "smo") return Algorithm::SMO;
  throw Error("unknown algorithm '" + std::string(text) + "' (expected ta or smo)");
}

std::string_view suite_name(Suite suite) {
  switch (suite) {
    case Suite::Dimension: return "dimension";
    case Suite::Distance: return "distance";
    case Suite::Intersection: return "intersection";
  }
  return "unknown";
}

Suite parse_suite(std::string_view text) {
  if (text == "dimension") return Suite::Dimension;
  if (text == "distance") return Suite::Distance;
  if (text == "intersection") return Suite::Intersection;
  throw Error("unknown suite '" + std::string(text) + "' (expected dimension, distance or intersection)");
}

std::string csv_line(const ExperimentRow& row) {
  std::string line = row.suite;
  auto add = [&](const std::string& field) {
    line += ',';
    line += field;
  };
  add(std::to_string(row.dim));
  add(std::to_string(row.na));
  add(std::to_string(row.nb));
  add(format_double(row.factor));
  add(std::to_string(row.seed));
  add(std::string(algorithm_name(row.algo)));
  add(std::to_string(row.iterations));
  char time[32];
  std::snprintf(time, sizeof time, "%.6f", row.time_s);
  add(time);
  add(format_double(row.distance));
  add(std::to_string(row.sparsity));
  add(std::string(status_name(row.status)));
  return line;
}

void write_rows(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& row : rows) out << csv_line(row) << '\n';
}

TriangleOptions SolverSettings::triangle_options() const {
  TriangleOptions options = triangle;
  options.epsilon = epsilon;
  options.max_iterations = max_iterations;
  return options;
}

SmoOptions SolverSettings::smo_options(std::uint64_t seed) const {
  SmoOptions options;
  options.tol = tol;
  options.max_iterations = max_iterations;
  options.seed = seed;
  return options;
}

namespace {

double distance_along(PointView normal, const PointSet& a, const PointSet& b) {
  if (norm(normal) == 0.0) return 0.0;
  return reported_distance(normal, 0.0, a, b);
}

}  // namespace

RunOutcome run_triangle(const PointSet& a, const PointSet& b, const SolverSettings& settings, bool intersection_only) {
  const TriangleOptions options = settings.triangle_options();
  if (intersection_only) {
    const Ta1Result r = ta1_solve(a, b, options);
    return {r.report, distance_along(subtract(r.b.point(), r.a.point()), a, b)};
  }
  const DistanceResult r = ta_distance(a, b, options);
  return {r.report, distance_along(subtract(r.b.point(), r.a.point()), a, b)};
}

RunOutcome run_smo(const PointSet& a, const PointSet& b, const SolverSettings& settings, std::uint64_t seed) {
  const LabeledProblem problem = LabeledProblem::from_sets(a, b, settings.C);
  const SvmSolution sol = smo_solve(problem, settings.smo_options(seed));
  return {sol.report, distance_along(sol.w, a, b)};
}

BenchConfig BenchConfig::defaults(Suite suite) {
  BenchConfig config;
  config.suite = suite;
  switch (suite) {
    case Suite::Dimension:
      config.dims = {2, 10, 50, 100};
      config.na = config.nb = 200;
      config.factor = 1.1;
      break;
    case Suite::Distance:
      config.dim = 1000;
      config.ks = {0.9, 0.7, 0.5, 0.3, 0.1};
      config.na = config.nb = 50;
      break;
    case Suite::Intersection:
      config.dims = {2, 3, 5, 10};
      config.na = config.nb = 200;
      config.factor = 0.9;
      break;
  }
  return config;
}

void BenchConfig::validate() const {
  if (na == 0 || nb == 0) throw Error("set sizes must be positive");
  if (seeds == 0) throw Error("seeds must be positive");
  if (jobs == 0) throw Error("jobs must be positive");
  if (suite == Suite::Distance) {
    if (dim == 0) throw Error("dimension must be positive");
    if (ks.empty()) throw Error("no k values given");
    for (double k : ks)
      if (!(k >= 0.0 && k <= 1.0)) throw Error("k values must lie in [0, 1]");
  } else {
    if (dims.empty()) throw Error("no dimensions given");
    for (std::size_t d : dims)
      if (d == 0) throw Error("dimensions must be positive");
    if (!(factor >= 0.0)) throw Error("factor must be non-negative");
  }
}

std::vector<ExperimentRow> run_bench(const BenchConfig& config) {
  config.validate();

  std::vector<InstanceSpec> instances;
  auto add_seeds = [&](std::size_t dim, double factor) {
    for (std::size_t s = 0; s < config.seeds; ++s) {
      InstanceSpec spec;
      spec.dim = dim;
      spec.na = config.na;
      spec.nb = config.nb;
      spec.translation_factor = factor;
      spec.seed = config.base_seed + s;
      instances.push_back(spec);
    }
  };
  if (config.suite == Suite::Distance) {
    for (double k : config.ks) add_seeds(config.dim, 1.0 - k);
  } else {
    for (std::size_t d : config.dims) add_seeds(d, config.factor);
  }

  const bool both = config.suite != Suite::Intersection;
  const std::string suite(suite_name(config.suite));
  std::vector<std::vector<ExperimentRow>> results(instances.size());

  auto run_one = [&](std::size_t i) {
    const InstanceSpec& spec = instances[i];
    const TwoBallInstance inst = generate_two_balls(spec);
    ExperimentRow base;
    base.suite = suite;
    base.dim = spec.dim;
    base.na = spec.na;
    base.nb = spec.nb;
    base.factor = spec.translation_factor;
    base.seed = spec.seed;
    auto fill = [&](Algorithm algo, const RunOutcome& outcome) {
      ExperimentRow row = base;
      row.algo = algo;
      row.iterations = outcome.report.iterations;
      row.time_s = outcome.report.wall_time;
      row.distance = outcome.distance;
      row.sparsity = outcome.report.sparsity;
      row.status = outcome.report.status;
      results[i].push_back(row);
    };
    fill(Algorithm::TA, run_triangle(inst.a, inst.b, config.settings, !both));
    if (both) fill(Algorithm::SMO, run_smo(inst.a, inst.b, config.settings, spec.seed));
  };

  const std::size_t workers = std::min(config.jobs, instances.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < instances.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < instances.size(); i = next++) {
          try {
            run_one(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<ExperimentRow> rows;
  for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

void write_summary(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  struct Acc {
    std::size_t runs = 0;
    double iterations = 0.0, time = 0.0, distance = 0.0, sparsity = 0.0;
    std::map<std::string, std::size_t> statuses;
  };
  using Key = std::tuple<std::size_t, double, int>;
  std::map<Key, Acc> groups;
  std::vector<Key> order;
  for (const auto& row : rows) {
    const Key key{row.dim, row.factor, static_cast<int>(row.algo)};
    auto [it, fresh] = groups.try_emplace(key);
    if (fresh) order.push_back(key);
    Acc& acc = it->second;
    ++acc.runs;
    acc.iterations += row.iterations;
    acc.time += row.time_s;
    acc.distance += row.distance;
    acc.sparsity += row.sparsity;
    ++acc.statuses[std::string(status_name(row.status))];
  }

  char line[256];
  std::snprintf(line, sizeof line, "%6s %8s %4s %12s %10s %12s %10s  %s\n", "dim", "factor", "algo", "iterations",
                "time_s", "distance", "sparsity", "status");
  out << line;
  for (const Key& key : order) {
    const Acc& acc = groups[key];
    const double n = static_cast<double>(acc.runs);
    std::string statuses;
    for (const auto& [name, count] : acc.statuses) {
      if (!statuses.empty()) statuses += ' ';
      statuses += name + ":" + std::to_string(count);
    }
    std::snprintf(line, sizeof line, "%6zu %8.3g %4s %12.1f %10.4f %12.6g %10.1f  %s\n", std::get<0>(key),
                  std::get<1>(key), algorithm_name(static_cast<Algorithm>(std::get<2>(key))).data(),
                  acc.iterations / n, acc.time / n, acc.distance / n, acc.sparsity / n, statuses.c_str());
    out << line;
  }
}

}  // namespace hullsep
