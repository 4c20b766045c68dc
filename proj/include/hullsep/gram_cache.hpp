#pragma once

#include <cstddef>
#include <list>
#include <memory>
#include <unordered_map>
#include <vector>

#include "hullsep/point_set.hpp"

namespace hullsep {

/// Lazily computed rows of the linear-kernel Gram matrix over the
/// concatenation of up to two point sets, with LRU eviction once the memory
/// budget is exceeded. Row i holds x_i . x_j for every j in the concatenation.
///
/// Rows are handed out as shared pointers so a row stays valid while held
/// even if the cache evicts it.
class GramRowCache {
 public:
  using Row = std::shared_ptr<const std::vector<double>>;

  GramRowCache(const PointSet& first, const PointSet* second, std::size_t budget_bytes);

  std::size_t size() const { return first_->size() + (second_ ? second_->size() : 0); }
  PointView point(std::size_t i) const;

  Row row(std::size_t i);

  std::size_t rows_computed() const { return rows_computed_; }
  std::size_t resident_rows() const { return lru_.size(); }
  std::size_t capacity_rows() const { return capacity_; }

 private:
  const PointSet* first_;
  const PointSet* second_;
  std::size_t capacity_;
  std::size_t rows_computed_ = 0;
  std::list<std::size_t> lru_;  // front = most recently used
  struct Slot {
    Row row;
    std::list<std::size_t>::iterator position;
  };
  std::unordered_map<std::size_t, Slot> slots_;
};

}  // namespace hullsep
