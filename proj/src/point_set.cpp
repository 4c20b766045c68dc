#include "hullsep/point_set.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hullsep {

namespace {
constexpr double kSnap = 1e-15;
}

PointSet::PointSet(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0) throw Error("point set dimension must be positive");
  if (coords_.empty()) throw Error("no points");
  if (coords_.size() % dim_ != 0) throw Error("coordinate count is not a multiple of the dimension");
  if (!all_finite(coords_)) throw Error("point coordinates must be finite");
  const std::size_t n = coords_.size() / dim_;
  squared_norms_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    squared_norms_[i] = hullsep::squared_norm((*this)[i]);
    max_norm_ = std::max(max_norm_, std::sqrt(squared_norms_[i]));
  }
}

PointSet PointSet::from_rows(const std::vector<Point>& rows) {
  if (rows.empty()) throw Error("no points");
  const std::size_t dim = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) {
      throw Error("point " + std::to_string(i) + " has dimension " + std::to_string(rows[i].size()) +
                  ", expected " + std::to_string(dim));
    }
    flat.insert(flat.end(), rows[i].begin(), rows[i].end());
  }
  return PointSet(dim, std::move(flat));
}

std::vector<Point> PointSet::rows() const {
  std::vector<Point> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.emplace_back((*this)[i].begin(), (*this)[i].end());
  return out;
}

PointSet PointSet::translated(PointView offset) const {
  if (offset.size() != dim_) throw Error("dimension mismatch");
  std::vector<double> shifted = coords_;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t k = 0; k < dim_; ++k) shifted[i * dim_ + k] += offset[k];
  return PointSet(dim_, std::move(shifted));
}

PointSet PointSet::concat(const PointSet& other) const {
  if (other.dim() != dim_) throw Error("dimension mismatch");
  std::vector<double> joined = coords_;
  joined.insert(joined.end(), other.coords_.begin(), other.coords_.end());
  return PointSet(dim_, std::move(joined));
}

double diameter(const PointSet& set) {
  double best = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i + 1; j < set.size(); ++j)
      best = std::max(best, squared_distance(set[i], set[j]));
  return std::sqrt(best);
}

// ---------------------------------------------------------------------------

ConvexIterate ConvexIterate::vertex(const PointSet& set, std::size_t index) {
  if (index >= set.size()) throw Error("vertex index out of range");
  std::vector<double> coeffs(set.size(), 0.0);
  coeffs[index] = 1.0;
  return ConvexIterate(set, std::move(coeffs), Point(set[index].begin(), set[index].end()));
}

ConvexIterate ConvexIterate::centroid(const PointSet& set) {
  return from_coefficients(set, std::vector<double>(set.size(), 1.0 / static_cast<double>(set.size())));
}

ConvexIterate ConvexIterate::from_coefficients(const PointSet& set, std::vector<double> weights) {
  if (weights.size() != set.size()) throw Error("coefficient count does not match the point count");
  double sum = 0.0;
  for (double& w : weights) {
    if (!(w >= 0.0)) throw Error("convex coefficients must be non-negative");
    if (w < kSnap) w = 0.0;
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error("convex coefficients must sum to one");
  Point point(set.dim(), 0.0);
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (weights[i] == 0.0) continue;
    const PointView v = set[i];
    for (std::size_t k = 0; k < point.size(); ++k) point[k] += weights[i] * v[k];
  }
  return ConvexIterate(set, std::move(weights), std::move(point));
}

void ConvexIterate::scale_coefficients(double keep) {
  for (double& c : coeffs_) {
    c *= keep;
    if (c < kSnap) c = 0.0;
  }
}

void ConvexIterate::step_toward_vertex(std::size_t index, double alpha) {
  if (alpha <= 0.0) return;
  if (alpha >= 1.0) {
    *this = vertex(*set_, index);
    return;
  }
  scale_coefficients(1.0 - alpha);
  coeffs_[index] += alpha;
  lerp_inplace(point_, (*set_)[index], alpha);
}

void ConvexIterate::step_toward(const Combination& target, PointView target_point, double alpha) {
  if (alpha <= 0.0) return;
  if (alpha >= 1.0) {
    std::fill(coeffs_.begin(), coeffs_.end(), 0.0);
    for (const auto& [index, weight] : target) coeffs_[index] += weight;
    point_.assign(target_point.begin(), target_point.end());
    return;
  }
  scale_coefficients(1.0 - alpha);
  for (const auto& [index, weight] : target) coeffs_[index] += alpha * weight;
  lerp_inplace(point_, target_point, alpha);
}

std::size_t ConvexIterate::support_size() const {
  return static_cast<std::size_t>(std::count_if(coeffs_.begin(), coeffs_.end(), [](double c) { return c > 0.0; }));
}

double ConvexIterate::coefficient_sum() const {
  double sum = 0.0;
  for (double c : coeffs_) sum += c;
  return sum;
}

double ConvexIterate::resynthesis_error() const {
  Point rebuilt(set_->dim(), 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0.0) continue;
    const PointView v = (*set_)[i];
    for (std::size_t k = 0; k < rebuilt.size(); ++k) rebuilt[k] += coeffs_[i] * v[k];
  }
  return distance(rebuilt, point_);
}

}  // namespace hullsep
