// hullsep: generate two-ball instances, test hull intersection, compute hull
// distance, and run benchmark suites.
//
// Exit codes: 0 separated (or a converged soft-margin run), 1 intersecting,
// 2 usage or input error, 3 iteration budget exhausted.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "hullsep/bench.hpp"
#include "hullsep/csv.hpp"
#include "hullsep/instance.hpp"

using namespace hullsep;

namespace {

constexpr int kExitSeparated = 0;
constexpr int kExitIntersecting = 1;
constexpr int kExitError = 2;
constexpr int kExitMaxIterations = 3;

int exit_code(Status status) {
  switch (status) {
    case Status::Separated:
    case Status::Converged: return kExitSeparated;
    case Status::Intersecting: return kExitIntersecting;
    case Status::MaxIterations: return kExitMaxIterations;
  }
  return kExitError;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("HULLSEP_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long value = std::stoull(env, &used);
      if (used == std::string(env).size()) return value;
    } catch (const std::exception&) {
    }
    throw Error(std::string("HULLSEP_SEED is not an unsigned integer: '") + env + "'");
  }
  return 1;
}

double parse_c(const std::string& text) {
  if (text == "inf" || text == "infinity") return kInfinity;
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(value > 0.0)) throw Error("--c must be a positive number or 'inf'");
  return value;
}

template <class T>
std::vector<T> parse_list(const std::string& text, const char* flag) {
  std::vector<T> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::istringstream field(item);
    T value;
    if (!(field >> value) || !(field >> std::ws).eof()) throw Error(std::string(flag) + ": invalid list item '" + item + "'");
    out.push_back(value);
  }
  if (out.empty()) throw Error(std::string(flag) + ": empty list");
  return out;
}

void print(const char* key, const std::string& value) { std::cout << key << '=' << value << '\n'; }
void print(const char* key, double value) { print(key, format_double(value)); }
void print(const char* key, std::size_t value) { print(key, std::to_string(value)); }

struct TriangleFlags {
  bool no_cache = false, no_joint = false, no_zigzag = false, no_filter = false;

  void add(CLI::App* cmd) {
    cmd->add_flag("--no-cache", no_cache, "Disable the incremental dot-product cache");
    cmd->add_flag("--no-joint", no_joint, "Disable joint segment steps");
    cmd->add_flag("--no-zigzag", no_zigzag, "Disable the zig-zag guard");
    cmd->add_flag("--no-filter", no_filter, "Disable the non-bounding candidate filter");
  }
  void apply(TriangleOptions& o) const {
    o.use_cache = !no_cache;
    o.joint_steps = !no_joint;
    o.zigzag_guard = !no_zigzag;
    o.nonbounding_filter = !no_filter;
  }
};

void load_pair(const std::string& path_a, const std::string& path_b, PointSet*& a, PointSet*& b,
               std::unique_ptr<PointSet>& own_a, std::unique_ptr<PointSet>& own_b) {
  own_a = std::make_unique<PointSet>(load_csv(path_a));
  own_b = std::make_unique<PointSet>(load_csv(path_b));
  if (own_a->dim() != own_b->dim()) {
    throw Error("dimension mismatch: " + path_a + " has " + std::to_string(own_a->dim()) + " columns, " + path_b +
                " has " + std::to_string(own_b->dim()));
  }
  a = own_a.get();
  b = own_b.get();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex hull separation: Triangle Algorithm and SMO"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Write a seeded two-ball instance as two CSV files");
  InstanceSpec spec;
  std::string prefix = "instance";
  std::uint64_t gen_seed = 0;
  gen->add_option("--dim", spec.dim, "Dimension")->required();
  gen->add_option("--na", spec.na, "Points in the first set")->capture_default_str();
  gen->add_option("--nb", spec.nb, "Points in the second set")->capture_default_str();
  gen->add_option("--factor", spec.translation_factor, "Shift as a multiple of the larger diameter")
      ->capture_default_str();
  auto* gen_seed_opt = gen->add_option("--seed", gen_seed, "Random seed (default: HULLSEP_SEED or 1)");
  gen->add_option("--out-prefix", prefix, "Writes <prefix>_a.csv and <prefix>_b.csv")->capture_default_str();

  // intersect
  auto* intersect = app.add_subcommand("intersect", "Decide whether the hulls intersect (Triangle Algorithm I)");
  std::string path_a, path_b, report_csv;
  double epsilon = 1e-3;
  std::size_t max_iters = 10000;
  TriangleFlags tri_flags;
  intersect->add_option("--a", path_a, "First point set (CSV)")->required();
  intersect->add_option("--b", path_b, "Second point set (CSV)")->required();
  intersect->add_option("--epsilon", epsilon, "Approximation tolerance")->capture_default_str();
  intersect->add_option("--max-iters", max_iters, "Iteration budget")->capture_default_str();
  intersect->add_option("--csv", report_csv, "Also write the run as a CSV row to this file");
  tri_flags.add(intersect);

  // distance
  auto* dist = app.add_subcommand("distance", "Distance between the hulls and supporting hyperplanes");
  std::string algo_text = "ta", c_text = "inf";
  double tol = 1e-3;
  std::uint64_t smo_seed = 0;
  dist->add_option("--a", path_a, "First point set (CSV)")->required();
  dist->add_option("--b", path_b, "Second point set (CSV)")->required();
  dist->add_option("--algorithm", algo_text, "ta or smo")->capture_default_str();
  dist->add_option("--epsilon", epsilon, "Triangle Algorithm tolerance")->capture_default_str();
  dist->add_option("--tol", tol, "SMO optimality tolerance")->capture_default_str();
  dist->add_option("--c", c_text, "SMO box constraint, a number or inf")->capture_default_str();
  dist->add_option("--max-iters", max_iters, "Iteration budget (SMO: sweeps)")->capture_default_str();
  auto* smo_seed_opt = dist->add_option("--seed", smo_seed, "SMO random seed (default: HULLSEP_SEED or 1)");
  tri_flags.add(dist);

  // bench
  auto* bench = app.add_subcommand("bench", "Run a benchmark suite and write one CSV row per run");
  std::string suite_text, out_path = "results.csv", dims_text, ks_text;
  std::size_t seeds = 3, jobs = 1, n = 0, na = 0, nb = 0, fixed_dim = 0;
  double factor = -1.0;
  std::uint64_t bench_seed = 0;
  bench->add_option("--suite", suite_text, "dimension, distance or intersection")->required();
  bench->add_option("--out", out_path, "Output CSV")->capture_default_str();
  bench->add_option("--seeds", seeds, "Instances per setting")->capture_default_str();
  auto* bench_seed_opt = bench->add_option("--seed", bench_seed, "First seed (default: HULLSEP_SEED or 1)");
  bench->add_option("--dims", dims_text, "Comma-separated dimensions (dimension, intersection)");
  bench->add_option("--dim", fixed_dim, "Dimension (distance suite)");
  bench->add_option("--k", ks_text, "Comma-separated k values; shift = (1 - k) * diameter (distance suite)");
  bench->add_option("--n", n, "Points per set");
  bench->add_option("--na", na, "Points in the first set");
  bench->add_option("--nb", nb, "Points in the second set");
  bench->add_option("--factor", factor, "Shift factor (dimension, intersection)");
  bench->add_option("--epsilon", epsilon, "Triangle Algorithm tolerance")->capture_default_str();
  bench->add_option("--tol", tol, "SMO optimality tolerance")->capture_default_str();
  bench->add_option("--c", c_text, "SMO box constraint, a number or inf")->capture_default_str();
  bench->add_option("--max-iters", max_iters, "Iteration budget")->capture_default_str();
  bench->add_option("--jobs", jobs, "Instances run in parallel")->capture_default_str();
  tri_flags.add(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*gen) {
      spec.seed = gen_seed_opt->count() ? gen_seed : default_seed();
      const TwoBallInstance inst = generate_two_balls(spec);
      const std::string file_a = prefix + "_a.csv", file_b = prefix + "_b.csv";
      save_csv(inst.a, file_a);
      save_csv(inst.b, file_b);
      print("dim", spec.dim);
      print("na", spec.na);
      print("nb", spec.nb);
      print("factor", spec.translation_factor);
      print("seed", std::to_string(spec.seed));
      print("diameter_a", diameter(inst.a));
      print("diameter_b", diameter(inst.b));
      print("max_diameter", inst.max_diameter);
      print("shift", inst.shift);
      print("file_a", file_a);
      print("file_b", file_b);
      return 0;
    }

    PointSet *a = nullptr, *b = nullptr;
    std::unique_ptr<PointSet> own_a, own_b;
    SolverSettings settings;
    settings.epsilon = epsilon;
    settings.tol = tol;
    settings.max_iterations = max_iters;
    settings.C = parse_c(c_text);
    tri_flags.apply(settings.triangle);
    settings.triangle_options().validate();

    if (*intersect) {
      load_pair(path_a, path_b, a, b, own_a, own_b);
      const Ta1Result r = ta1_solve(*a, *b, settings.triangle_options());
      print("status", std::string(status_name(r.report.status)));
      print("iterations", r.report.iterations);
      print("time_s", r.report.wall_time);
      print("gap", r.report.distance_upper);
      print("sparsity", r.report.sparsity);
      if (r.witness) {
        print("distance_lower", r.report.distance_lower);
        print("bisector_offset", r.witness->bisector.offset);
      }
      if (!report_csv.empty()) {
        std::ofstream out(report_csv);
        if (!out) throw Error("cannot write " + report_csv);
        ExperimentRow row;
        row.suite = "intersect";
        row.dim = a->dim();
        row.na = a->size();
        row.nb = b->size();
        row.algo = Algorithm::TA;
        row.iterations = r.report.iterations;
        row.time_s = r.report.wall_time;
        row.distance = r.report.distance_upper;
        row.sparsity = r.report.sparsity;
        row.status = r.report.status;
        write_rows(out, {row});
        if (!out) throw Error("cannot write " + report_csv);
      }
      return exit_code(r.report.status);
    }

    if (*dist) {
      const Algorithm algo = parse_algorithm(algo_text);
      load_pair(path_a, path_b, a, b, own_a, own_b);
      const RunOutcome r = algo == Algorithm::TA
                               ? run_triangle(*a, *b, settings)
                               : run_smo(*a, *b, settings, smo_seed_opt->count() ? smo_seed : default_seed());
      print("algorithm", std::string(algorithm_name(algo)));
      print("status", std::string(status_name(r.report.status)));
      print("iterations", r.report.iterations);
      print("time_s", r.report.wall_time);
      print("distance", r.distance);
      print("sparsity", r.report.sparsity);
      if (algo == Algorithm::TA) {
        print("delta", r.report.distance_upper);
        print("delta_lower", r.report.distance_lower);
      } else {
        print("distance_upper", r.report.distance_upper);
      }
      return exit_code(r.report.status);
    }

    if (*bench) {
      BenchConfig config = BenchConfig::defaults(parse_suite(suite_text));
      if (!dims_text.empty()) config.dims = parse_list<std::size_t>(dims_text, "--dims");
      if (!ks_text.empty()) config.ks = parse_list<double>(ks_text, "--k");
      if (fixed_dim) config.dim = fixed_dim;
      if (n) config.na = config.nb = n;
      if (na) config.na = na;
      if (nb) config.nb = nb;
      if (factor >= 0.0) config.factor = factor;
      config.seeds = seeds;
      config.base_seed = bench_seed_opt->count() ? bench_seed : default_seed();
      config.jobs = jobs;
      config.settings = settings;

      std::ofstream out(out_path);
      if (!out) throw Error("cannot write " + out_path);
      const std::vector<ExperimentRow> rows = run_bench(config);
      write_rows(out, rows);
      out.flush();
      if (!out) throw Error("cannot write " + out_path);
      write_summary(std::cout, rows);
      print("rows", rows.size());
      print("out", out_path);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
