#include "hullsep/triangle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "hullsep/gram_cache.hpp"

namespace hullsep {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Argmax of score over `indices` (or over [0, n) when null). Scores within
// `tie` of the maximum count as tied and the lowest index wins, so rounding
// differences between cached and direct products do not change the choice.
// Returns n when there is nothing to scan.
template <class Score>
std::pair<std::size_t, double> argmax(std::size_t n, const std::vector<std::size_t>* indices, Score&& score,
                                      double tie, std::vector<double>& values) {
  double best_score = -INFINITY;
  std::size_t count = indices ? indices->size() : n;
  values.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    values[k] = score(indices ? (*indices)[k] : k);
    best_score = std::max(best_score, values[k]);
  }
  std::size_t best = n;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t i = indices ? (*indices)[k] : k;
    if (values[k] >= best_score - tie && i < best) best = i;
  }
  return {best, best_score};
}

template <class Score>
std::pair<std::size_t, double> argmax(std::size_t n, const std::vector<std::size_t>* indices, Score&& score,
                                      double tie = 0.0) {
  std::vector<double> values;
  return argmax(n, indices, score, tie, values);
}

// Tie width for scores of the form direction . x.
double tie_width(double direction_norm, double max_norm) { return 1e-10 * direction_norm * std::max(1.0, max_norm); }

std::pair<Hyperplane, Hyperplane> planes_through(const Point& normal, PointView on_a, PointView on_b) {
  return {Hyperplane{normal, dot(normal, on_a)}, Hyperplane{normal, dot(normal, on_b)}};
}

// ---------------------------------------------------------------------------
// Shared state of both phases. Vertices are addressed by "column": the points
// of A, then the points of B, then midpoints added by the zig-zag guard.

class Engine {
 public:
  enum class Outcome { Intersecting, Separated, Budget };

  Engine(ConvexIterate start_a, ConvexIterate start_b, const TriangleOptions& options, std::size_t budget)
      : a_set_(start_a.set()),
        b_set_(start_b.set()),
        opt_(options),
        budget_(budget),
        iterate_{std::move(start_a), std::move(start_b)},
        guard_(options.zigzag_window, options.zigzag_epsilon) {
    if (a_set_.dim() != b_set_.dim()) throw Error("dimension mismatch");
    ref_[0] = Point(iterate_[0].point().begin(), iterate_[0].point().end());
    ref_[1] = Point(iterate_[1].point().begin(), iterate_[1].point().end());
    if (opt_.use_cache) {
      gram_.emplace(a_set_, &b_set_, opt_.gram_budget_bytes);
      cache_ = DotCache(iterate_[0].point(), iterate_[1].point(), base_columns(),
                        [this](std::size_t c) { return column_point(c); });
    }
  }

  std::size_t iterations() const { return iterations_; }
  const ConvexIterate& iterate(Side s) const { return iterate_[idx(s)]; }

  double gap() const { return distance(iterate_[0].point(), iterate_[1].point()); }

  Outcome phase1(bool approximate_stop) {
    for (;;) {
      if (approximate_stop) {
        const double g = gap();
        if (g <= opt_.epsilon * distance(iterate_[0].point(), ref_[0]) ||
            g <= opt_.epsilon * distance(iterate_[1].point(), ref_[1]))
          return Outcome::Intersecting;
      }
      const auto pivot_a = side_pivot(Side::A);
      std::optional<std::size_t> pivot_b;
      if (!pivot_a || opt_.joint_steps) pivot_b = side_pivot(Side::B);
      if (!pivot_a && !pivot_b) return Outcome::Separated;
      if (iterations_ >= budget_) return Outcome::Budget;

      const double before = gap();
      if (pivot_a && pivot_b) {
        const std::size_t ca = prefer_synthetic(Side::A, *pivot_a);
        const std::size_t cb = prefer_synthetic(Side::B, *pivot_b);
        const JointStep js = joint_step(iterate_[0].point(), column_point(ca), iterate_[1].point(), column_point(cb));
        apply(Side::A, ca, js.s);
        apply(Side::B, cb, js.t);
        finish_step(StepEvent::Kind::Joint, Side::A, before, {{Side::A, ca}, {Side::B, cb}});
      } else {
        const Side s = pivot_a ? Side::A : Side::B;
        const std::size_t c = prefer_synthetic(s, pivot_a ? *pivot_a : *pivot_b);
        move(s, c);
        finish_step(StepEvent::Kind::Pivot, s, before, {{s, c}});
      }
    }
  }

  Outcome phase2() {
    for (;;) {
      const Outcome inner = phase1(false);
      if (inner != Outcome::Separated) return inner;

      const GapEstimate est = estimate();
      const double eps = opt_.epsilon;
      const double noise = rounding_noise(est);
      if (est.error <= eps * est.rho_a + noise || est.error <= eps * est.rho_b + noise) return Outcome::Separated;
      if (iterations_ >= budget_) return Outcome::Budget;

      Side s;
      std::size_t c;
      if (est.error_a > 0.5 * eps * est.rho_a + noise) {
        s = Side::A;
        c = est.extreme_a;
      } else if (est.error_b > 0.5 * eps * est.rho_b + noise) {
        s = Side::B;
        c = a_set_.size() + est.extreme_b;
      } else {
        // The two halves of the error sum to the whole, so one of the
        // tests above holds whenever the stopping test fails.
        return Outcome::Separated;
      }
      const double before = gap();
      c = prefer_synthetic(s, c);
      move(s, c);
      finish_step(StepEvent::Kind::Weak, s, before, {{s, c}});
      // No representable progress left.
      if (gap() >= before) return Outcome::Separated;
    }
  }

 private:
  static std::size_t idx(Side s) { return s == Side::A ? 0 : 1; }

  // Absolute rounding error of the gap estimates, which are differences of
  // dot products with the iterates and the extreme vertices.
  double rounding_noise(const GapEstimate& est) const {
    const double size = norm(iterate_[0].point()) + norm(iterate_[1].point()) +
                        norm(a_set_[est.extreme_a]) + norm(b_set_[est.extreme_b]);
    return 64.0 * std::numeric_limits<double>::epsilon() * size;
  }

  std::size_t base_columns() const { return a_set_.size() + b_set_.size(); }
  std::size_t first_column(Side s) const { return s == Side::A ? 0 : a_set_.size(); }
  const PointSet& set(Side s) const { return s == Side::A ? a_set_ : b_set_; }

  PointView column_point(std::size_t c) const {
    if (c < a_set_.size()) return a_set_[c];
    if (c < base_columns()) return b_set_[c - a_set_.size()];
    return synthetic_[c - base_columns()].point;
  }

  Combination combination_of(std::size_t c) const {
    if (c < a_set_.size()) return {{c, 1.0}};
    if (c < base_columns()) return {{c - a_set_.size(), 1.0}};
    return synthetic_[c - base_columns()].combination;
  }

  double squared_norm_of(Side s) const {
    return cache_ ? cache_->squared_norm(s) : squared_norm(iterate_[idx(s)].point());
  }

  // Best original vertex of side s by (p_other - p_s) . v; a pivot when the
  // score reaches (|p_other|^2 - |p_s|^2) / 2.
  std::optional<std::size_t> side_pivot(Side s) {
    const std::size_t i = idx(s);
    const Side o = other(s);
    const std::size_t n = set(s).size();
    const std::size_t first = first_column(s);
    const double threshold = 0.5 * (squared_norm_of(o) - squared_norm_of(s));

    Point direction;
    if (!cache_) direction = subtract(iterate_[idx(o)].point(), iterate_[i].point());
    auto score = [&](std::size_t k) {
      if (cache_) return cache_->dot(o, first + k) - cache_->dot(s, first + k);
      return dot(direction, set(s)[k]);
    };

    const double tie = tie_width(gap(), set(s).max_norm());
    if (opt_.nonbounding_filter && filter_valid_[i]) {
      const auto [best, value] = argmax(n, &filter_[i], score, tie, scores_);
      if (best < n && value >= threshold) return first + best;
    }

    const auto [best, value] = argmax(n, nullptr, score, tie, scores_);
    if (opt_.nonbounding_filter) {
      const double own = cache_ ? cache_->cross() - cache_->squared_norm(s) : dot(direction, iterate_[i].point());
      // Vertices level with the iterate (it often sits on one) stay out
      // regardless of rounding, so cached and direct runs build equal subsets.
      const double margin = 1e-9 * gap() * std::max(1.0, set(s).max_norm());
      filter_[i].clear();
      for (std::size_t k = 0; k < n; ++k)
        if (scores_[k] > own + margin) filter_[i].push_back(k);
      filter_valid_[i] = true;
    }
    if (value >= threshold) return first + best;
    return std::nullopt;
  }

  double self_product(std::size_t c) const {
    if (c < a_set_.size()) return a_set_.squared_norm(c);
    if (c < base_columns()) return b_set_.squared_norm(c - a_set_.size());
    return synthetic_[c - base_columns()].self;
  }

  // Squared gap after moving the iterate of side s to its nearest point on the
  // segment toward column c, with the rounding scale of the expression.
  std::pair<double, double> gap_after_move(Side s, std::size_t c) const {
    const Side o = other(s);
    double xu, yu, xx, yy, xy;
    if (cache_) {
      xu = cache_->dot(s, c);
      yu = cache_->dot(o, c);
      xx = cache_->squared_norm(s);
      yy = cache_->squared_norm(o);
      xy = cache_->cross();
    } else {
      const PointView x = iterate_[idx(s)].point();
      const PointView y = iterate_[idx(o)].point();
      const PointView u = column_point(c);
      xu = dot(x, u);
      yu = dot(y, u);
      xx = squared_norm(x);
      yy = squared_norm(y);
      xy = dot(x, y);
    }
    const double uu = self_product(c);
    const double base = xx + yy - 2.0 * xy;
    const double num = yu - xy - xu + xx;
    const double den = uu - 2.0 * xu + xx;
    const double scale = xx + yy + uu;
    if (!(den > 0.0)) return {base, scale};
    const double alpha = std::clamp(num / den, 0.0, 1.0);
    return {base - 2.0 * alpha * num + alpha * alpha * den, scale};
  }

  // Among the chosen vertex and the midpoints of side s, the one whose single
  // move brings the iterates closest. A midpoint must win by more than the
  // rounding error of the comparison.
  std::size_t prefer_synthetic(Side s, std::size_t column) const {
    bool any = false;
    for (const auto& syn : synthetic_) any = any || syn.side == s;
    if (!any) return column;

    std::size_t best = column;
    auto [best_gap, scale] = gap_after_move(s, column);
    for (std::size_t k = 0; k < synthetic_.size(); ++k) {
      if (synthetic_[k].side != s) continue;
      const auto [g, g_scale] = gap_after_move(s, base_columns() + k);
      if (g < best_gap - 1e-12 * std::max(scale, g_scale)) {
        best_gap = g;
        best = base_columns() + k;
      }
    }
    return best;
  }

  void move(Side s, std::size_t column) {
    const auto proj = nearest_on_segment(iterate_[idx(other(s))].point(), iterate_[idx(s)].point(), column_point(column));
    apply(s, column, proj.alpha);
  }

  void apply(Side s, std::size_t column, double alpha) {
    const std::size_t i = idx(s);
    const PointView v = column_point(column);
    if (alpha > 0.0) {
      if (cache_) cache_->step(s, alpha, column, row_of(column));
      if (column < base_columns())
        iterate_[i].step_toward_vertex(column - first_column(s), alpha);
      else
        iterate_[i].step_toward(synthetic_[column - base_columns()].combination, v, alpha);
    }
    ref_[i].assign(v.begin(), v.end());
  }

  std::span<const double> row_of(std::size_t column) {
    if (column >= base_columns()) return synthetic_[column - base_columns()].row;
    const auto row = gram_->row(column);
    scratch_.assign(row->begin(), row->end());
    for (const auto& syn : synthetic_) scratch_.push_back(syn.row[column]);
    return scratch_;
  }

  void finish_step(StepEvent::Kind kind, Side side, double before, std::initializer_list<VertexRef> pivots) {
    ++iterations_;
    const double after = gap();
    if (opt_.on_step) opt_.on_step(StepEvent{kind, side, before, after, iterations_});
    if (!opt_.zigzag_guard) return;
    guard_.record(before, after, std::span<const VertexRef>(pivots.begin(), pivots.size()));
    if (const auto pair = guard_.detect()) {
      guard_.clear();
      add_midpoint(pair->first.side, pair->first.id, pair->second.id);
    }
  }

  void add_midpoint(Side s, std::size_t c1, std::size_t c2) {
    if (synthetic_.size() >= opt_.max_synthetic) return;
    if (!midpoint_pairs_.insert(std::minmax(c1, c2)).second) return;

    Synthetic syn{s, midpoint_combination(combination_of(c1), combination_of(c2)),
                  midpoint(column_point(c1), column_point(c2)), 0.0, {}};
    syn.self = squared_norm(syn.point);
    if (cache_) {
      const std::size_t columns = base_columns() + synthetic_.size() + 1;
      syn.row.resize(columns);
      for (std::size_t c = 0; c < base_columns(); ++c) syn.row[c] = dot(syn.point, column_point(c));
      for (std::size_t k = 0; k < synthetic_.size(); ++k) {
        const double value = dot(syn.point, synthetic_[k].point);
        syn.row[base_columns() + k] = value;
        synthetic_[k].row.push_back(value);
      }
      syn.row.back() = syn.self;
      cache_->add_column(dot(iterate_[0].point(), syn.point), dot(iterate_[1].point(), syn.point));
    }
    synthetic_.push_back(std::move(syn));
  }

  // Extremes are chosen from the cached products; the bounds themselves are
  // evaluated from coordinates.
  GapEstimate estimate() const {
    if (!cache_) return estimate_gap(iterate_[0], iterate_[1]);
    const std::size_t na = a_set_.size();
    auto h_dot = [&](std::size_t c) { return cache_->dot(Side::A, c) - cache_->dot(Side::B, c); };
    const double length = gap();
    const std::size_t ea =
        argmax(na, nullptr, [&](std::size_t k) { return -h_dot(k); }, tie_width(length, a_set_.max_norm())).first;
    const std::size_t eb = argmax(b_set_.size(), nullptr, [&](std::size_t k) { return h_dot(na + k); },
                                  tie_width(length, b_set_.max_norm()))
                               .first;
    return finish_estimate(iterate_[0].point(), iterate_[1].point(), a_set_[ea], b_set_[eb], ea, eb);
  }

 public:
  static GapEstimate finish_estimate(PointView p, PointView q, PointView va, PointView vb, std::size_t ea,
                                     std::size_t eb) {
    GapEstimate est;
    est.extreme_a = ea;
    est.extreme_b = eb;
    est.rho_a = distance(p, va);
    est.rho_b = distance(q, vb);
    const Point h = subtract(p, q);
    est.delta = norm(h);
    if (est.delta == 0.0) return est;
    // h.(p - v) and h.(v' - p') from coordinate differences: exact zeros stay
    // zero, and neither can be negative for an argmin/argmax vertex.
    double sa = 0.0, sb = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      sa += h[i] * (p[i] - va[i]);
      sb += h[i] * (vb[i] - q[i]);
    }
    est.error_a = std::max(0.0, sa) / est.delta;
    est.error_b = std::max(0.0, sb) / est.delta;
    est.error = est.error_a + est.error_b;
    est.delta_lower = est.delta - est.error;
    return est;
  }

 private:
  struct Synthetic {
    Side side;
    Combination combination;
    Point point;
    double self;              // point . point
    std::vector<double> row;  // products with every column, cached mode only
  };

  const PointSet& a_set_;
  const PointSet& b_set_;
  const TriangleOptions& opt_;
  std::size_t budget_;
  std::size_t iterations_ = 0;

  ConvexIterate iterate_[2];
  Point ref_[2];

  std::optional<GramRowCache> gram_;
  std::optional<DotCache> cache_;
  std::vector<double> scratch_;
  std::vector<double> scores_;

  std::vector<std::size_t> filter_[2];
  bool filter_valid_[2] = {false, false};

  ZigzagGuard guard_;
  std::vector<Synthetic> synthetic_;
  std::set<std::pair<std::size_t, std::size_t>> midpoint_pairs_;
};

Point iterate_gap_normal(const ConvexIterate& a, const ConvexIterate& b) { return subtract(a.point(), b.point()); }

// Report fields shared by every outcome of phase I.
SolveReport phase1_report(Engine::Outcome outcome, const Engine& engine) {
  SolveReport report;
  const ConvexIterate& a = engine.iterate(Side::A);
  const ConvexIterate& b = engine.iterate(Side::B);
  report.iterations = engine.iterations();
  report.sparsity = a.support_size() + b.support_size();
  report.distance_upper = engine.gap();
  switch (outcome) {
    case Engine::Outcome::Intersecting:
      report.status = Status::Intersecting;
      break;
    case Engine::Outcome::Separated:
    case Engine::Outcome::Budget: {
      report.status = outcome == Engine::Outcome::Separated ? Status::Separated : Status::MaxIterations;
      if (report.distance_upper == 0.0) break;
      const Point h = iterate_gap_normal(a, b);
      const SupportExtremes ext = support_extremes(h, a.set(), b.set());
      report.distance_lower = std::max(0.0, ext.delta_lower);
      if (report.status == Status::Separated)
        report.support_planes = planes_through(h, a.set()[ext.a_index], b.set()[ext.b_index]);
      break;
    }
  }
  return report;
}

SolveReport phase2_report(Engine::Outcome outcome, const Engine& engine, GapEstimate& gap) {
  SolveReport report;
  const ConvexIterate& a = engine.iterate(Side::A);
  const ConvexIterate& b = engine.iterate(Side::B);
  gap = estimate_gap(a, b);
  report.status = outcome == Engine::Outcome::Separated ? Status::Separated : Status::MaxIterations;
  report.iterations = engine.iterations();
  report.sparsity = a.support_size() + b.support_size();
  report.distance_upper = gap.delta;
  report.distance_lower = std::max(0.0, gap.delta_lower);
  report.support_planes = planes_through(iterate_gap_normal(a, b), a.set()[gap.extreme_a], b.set()[gap.extreme_b]);
  return report;
}

WitnessCertificate make_witness(const Engine& engine) {
  const ConvexIterate& a = engine.iterate(Side::A);
  const ConvexIterate& b = engine.iterate(Side::B);
  return WitnessCertificate{a, b, bisector(a.point(), b.point())};
}

}  // namespace

// ---------------------------------------------------------------------------

void TriangleOptions::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("epsilon must lie in (0, 1)");
  if (max_iterations == 0) throw Error("max_iterations must be positive");
  if (zigzag_window < 2) throw Error("zigzag window must be at least 2");
  if (!(zigzag_epsilon > 0.0)) throw Error("zigzag epsilon must be positive");
}

PivotFilter nonbounding_candidates(const ConvexIterate& a, const ConvexIterate& b) {
  PivotFilter filter;
  const Point toward_b = subtract(b.point(), a.point());
  const Point toward_a = subtract(a.point(), b.point());
  const double own_a = dot(toward_b, a.point());
  const double own_b = dot(toward_a, b.point());
  for (std::size_t i = 0; i < a.set().size(); ++i)
    if (dot(toward_b, a.set()[i]) > own_a) filter.a.push_back(i);
  for (std::size_t j = 0; j < b.set().size(); ++j)
    if (dot(toward_a, b.set()[j]) > own_b) filter.b.push_back(j);
  return filter;
}

PivotResult find_pivot(const ConvexIterate& a, const ConvexIterate& b, const PivotFilter* filter) {
  auto search = [&](const ConvexIterate& self, const ConvexIterate& opposite,
                    const std::vector<std::size_t>* subset) -> std::optional<std::size_t> {
    const Point direction = subtract(opposite.point(), self.point());
    const double threshold = 0.5 * (squared_norm(opposite.point()) - squared_norm(self.point()));
    const std::size_t n = self.set().size();
    auto score = [&](std::size_t k) { return dot(direction, self.set()[k]); };
    const double tie = tie_width(norm(direction), self.set().max_norm());
    if (subset) {
      const auto [best, value] = argmax(n, subset, score, tie);
      if (best < n && value >= threshold) return best;
    }
    const auto [best, value] = argmax(n, nullptr, score, tie);
    if (value >= threshold) return best;
    return std::nullopt;
  };
  if (const auto i = search(a, b, filter ? &filter->a : nullptr)) return {PivotKind::InA, *i, false};
  if (const auto j = search(b, a, filter ? &filter->b : nullptr)) return {PivotKind::InB, *j, false};
  return {};
}

SupportExtremes support_extremes(PointView normal, const PointSet& a, const PointSet& b) {
  if (a.dim() != normal.size() || b.dim() != normal.size()) throw Error("dimension mismatch");
  const double length = norm(normal);
  if (length == 0.0) throw Error("zero normal");
  SupportExtremes ext;
  const auto [ia, min_neg] =
      argmax(a.size(), nullptr, [&](std::size_t k) { return -dot(normal, a[k]); }, tie_width(length, a.max_norm()));
  const auto [ib, max_b] =
      argmax(b.size(), nullptr, [&](std::size_t k) { return dot(normal, b[k]); }, tie_width(length, b.max_norm()));
  ext.a_index = ia;
  ext.b_index = ib;
  ext.delta_lower = (-min_neg - max_b) / length;
  return ext;
}

GapEstimate estimate_gap(const ConvexIterate& a, const ConvexIterate& b) {
  const Point h = subtract(a.point(), b.point());
  std::size_t ea = 0, eb = 0;
  if (norm(h) > 0.0) {
    const SupportExtremes ext = support_extremes(h, a.set(), b.set());
    ea = ext.a_index;
    eb = ext.b_index;
  }
  return Engine::finish_estimate(a.point(), b.point(), a.set()[ea], b.set()[eb], ea, eb);
}

bool witness_holds(const WitnessCertificate& w, double tol) {
  const PointSet& a = w.a.set();
  const PointSet& b = w.b.set();
  const Hyperplane& plane = w.bisector;
  if (plane.normal.size() != a.dim() || plane.normal.size() != b.dim()) return false;
  const double scale = norm(plane.normal) * std::max({1.0, a.max_norm(), b.max_norm()});
  const double slack = tol * scale;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(plane.side(a[i]) > -slack)) return false;
  for (std::size_t j = 0; j < b.size(); ++j)
    if (!(plane.side(b[j]) < slack)) return false;
  return true;
}

Ta1Result ta1_solve(const PointSet& a, const PointSet& b, const TriangleOptions& options,
                    std::optional<ConvexIterate> start_a, std::optional<ConvexIterate> start_b) {
  options.validate();
  if (a.dim() != b.dim()) throw Error("dimension mismatch");
  if (start_a && &start_a->set() != &a) throw Error("starting iterate belongs to another set");
  if (start_b && &start_b->set() != &b) throw Error("starting iterate belongs to another set");

  const auto start = Clock::now();
  Engine engine(start_a ? std::move(*start_a) : ConvexIterate::centroid(a),
                start_b ? std::move(*start_b) : ConvexIterate::centroid(b), options, options.max_iterations);
  const Engine::Outcome outcome = engine.phase1(true);
  SolveReport report = phase1_report(outcome, engine);
  report.wall_time = seconds_since(start);

  Ta1Result result{report, engine.iterate(Side::A), engine.iterate(Side::B), std::nullopt};
  if (outcome == Engine::Outcome::Separated) result.witness = make_witness(engine);
  return result;
}

Ta2Result ta2_solve(const WitnessCertificate& witness, const TriangleOptions& options) {
  options.validate();
  if (witness.a.set().dim() != witness.b.set().dim()) throw Error("dimension mismatch");
  if (!witness_holds(witness)) throw Error("not a witness pair: the bisector does not separate the sets");

  const auto start = Clock::now();
  Engine engine(witness.a, witness.b, options, options.max_iterations);
  const Engine::Outcome outcome = engine.phase2();
  GapEstimate gap;
  SolveReport report = phase2_report(outcome, engine, gap);
  report.wall_time = seconds_since(start);
  return Ta2Result{report, make_witness(engine), gap};
}

DistanceResult ta_distance(const PointSet& a, const PointSet& b, const TriangleOptions& options) {
  options.validate();
  if (a.dim() != b.dim()) throw Error("dimension mismatch");

  const auto start = Clock::now();
  Engine engine(ConvexIterate::centroid(a), ConvexIterate::centroid(b), options, options.max_iterations);
  const Engine::Outcome first = engine.phase1(true);
  const std::size_t phase1_iterations = engine.iterations();

  DistanceResult result{{}, engine.iterate(Side::A), engine.iterate(Side::B), std::nullopt, std::nullopt,
                        phase1_iterations};
  if (first != Engine::Outcome::Separated) {
    result.report = phase1_report(first, engine);
  } else {
    const Engine::Outcome second = engine.phase2();
    GapEstimate gap;
    result.report = phase2_report(second, engine, gap);
    result.gap = gap;
    result.a = engine.iterate(Side::A);
    result.b = engine.iterate(Side::B);
    if (second == Engine::Outcome::Separated) result.witness = make_witness(engine);
  }
  result.report.wall_time = seconds_since(start);
  return result;
}

// ---------------------------------------------------------------------------

JointStep joint_step(PointView a, PointView pivot_a, PointView b, PointView pivot_b) {
  const SegmentClosest both = closest_segment_points({a, pivot_a, b, pivot_b});
  JointStep best{both.first, both.second, both.s, both.t};
  double best_gap = squared_distance(best.a, best.b);

  const SegmentProjection move_a = nearest_on_segment(b, a, pivot_a);
  if (const double g = squared_distance(move_a.point, b); g < best_gap) {
    best = JointStep{move_a.point, Point(b.begin(), b.end()), move_a.alpha, 0.0};
    best_gap = g;
  }
  const SegmentProjection move_b = nearest_on_segment(a, b, pivot_b);
  if (const double g = squared_distance(a, move_b.point); g < best_gap)
    best = JointStep{Point(a.begin(), a.end()), move_b.point, 0.0, move_b.alpha};
  return best;
}

DotCache::DotCache(PointView a, PointView b, std::size_t columns,
                   const std::function<PointView(std::size_t)>& column) {
  dots_[0].resize(columns);
  dots_[1].resize(columns);
  for (std::size_t c = 0; c < columns; ++c) {
    const PointView x = column(c);
    dots_[0][c] = hullsep::dot(a, x);
    dots_[1][c] = hullsep::dot(b, x);
  }
  sq_[0] = hullsep::squared_norm(a);
  sq_[1] = hullsep::squared_norm(b);
  cross_ = hullsep::dot(a, b);
}

void DotCache::step(Side s, double alpha, std::size_t column, std::span<const double> row) {
  if (row.size() != columns()) throw Error("row length does not match the cache");
  const std::size_t i = index(s);
  const double keep = 1.0 - alpha;
  sq_[i] = keep * keep * sq_[i] + 2.0 * alpha * keep * dots_[i][column] + alpha * alpha * row[column];
  auto& d = dots_[i];
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = keep * d[j] + alpha * row[j];
  cross_ = keep * cross_ + alpha * dots_[1 - i][column];
}

void DotCache::add_column(double dot_a, double dot_b) {
  dots_[0].push_back(dot_a);
  dots_[1].push_back(dot_b);
}

ZigzagGuard::ZigzagGuard(std::size_t window, double epsilon) : window_(window), epsilon_(epsilon) {
  if (window_ < 2) throw Error("zigzag window must be at least 2");
}

void ZigzagGuard::record(double gap_before, double gap_after, std::span<const VertexRef> pivots) {
  history_.push_back(Entry{gap_before, gap_after, {pivots.begin(), pivots.end()}});
  while (history_.size() > window_) history_.pop_front();
}

std::optional<std::pair<VertexRef, VertexRef>> ZigzagGuard::detect() const {
  if (history_.size() < window_) return std::nullopt;
  const double now = history_.back().gap_after;
  if (history_.front().gap_before - now >= epsilon_ * now) return std::nullopt;

  std::size_t moves[2] = {0, 0};
  for (const auto& e : history_)
    for (const auto& p : e.pivots) ++moves[p.side == Side::A ? 0 : 1];
  const Side busy = moves[1] > moves[0] ? Side::B : Side::A;

  std::map<std::size_t, std::size_t> count;
  for (const auto& e : history_)
    for (const auto& p : e.pivots)
      if (p.side == busy) ++count[p.id];
  if (count.size() < 2) return std::nullopt;

  std::vector<std::pair<std::size_t, std::size_t>> ranked(count.begin(), count.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) { return x.second > y.second; });
  return std::pair{VertexRef{busy, ranked[0].first}, VertexRef{busy, ranked[1].first}};
}

Combination midpoint_combination(const Combination& x, const Combination& y) {
  std::map<std::size_t, double> merged;
  for (const auto& [i, w] : x) merged[i] += 0.5 * w;
  for (const auto& [i, w] : y) merged[i] += 0.5 * w;
  return {merged.begin(), merged.end()};
}

}  // namespace hullsep
