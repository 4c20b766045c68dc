#include "hullsep/gram_cache.hpp"

#include <algorithm>

namespace hullsep {

GramRowCache::GramRowCache(const PointSet& first, const PointSet* second, std::size_t budget_bytes)
    : first_(&first), second_(second) {
  if (second_ && second_->dim() != first_->dim()) throw Error("dimension mismatch");
  const std::size_t row_bytes = size() * sizeof(double);
  // Two rows must fit at once: pair updates hold both.
  capacity_ = std::max<std::size_t>(2, budget_bytes / std::max<std::size_t>(row_bytes, 1));
}

PointView GramRowCache::point(std::size_t i) const {
  return i < first_->size() ? (*first_)[i] : (*second_)[i - first_->size()];
}

GramRowCache::Row GramRowCache::row(std::size_t i) {
  if (auto it = slots_.find(i); it != slots_.end()) {
    lru_.splice(lru_.begin(), lru_, it->second.position);
    return it->second.row;
  }
  const PointView xi = point(i);
  auto values = std::make_shared<std::vector<double>>(size());
  for (std::size_t j = 0; j < values->size(); ++j) (*values)[j] = dot(xi, point(j));
  ++rows_computed_;

  if (slots_.size() >= capacity_) {
    slots_.erase(lru_.back());
    lru_.pop_back();
  }
  lru_.push_front(i);
  Row shared = std::move(values);
  slots_.emplace(i, Slot{shared, lru_.begin()});
  return shared;
}

}  // namespace hullsep
