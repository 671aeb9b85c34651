#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "wakimoto/linear_combination.hpp"

namespace wakimoto {

/// Echelon basis of a subspace of a space with interned basis ids.
///
/// Every id carries a tier; columns are ordered by (tier, id), so a row whose
/// pivot has tier t lies entirely in tiers >= t. Rows are kept primitive over
/// the integers and reduced fraction-free.
class SpanEngine {
 public:
  using TierFn = std::function<int(int id)>;

  explicit SpanEngine(TierFn tier);

  /// Adds v; returns the pivot tier of the new row, or nothing if v was dependent.
  std::optional<int> insert(const SparseVec& v);

  bool contains(const SparseVec& v);
  /// Fully reduced remainder of v (a scalar multiple of the projection along the span).
  SparseVec reduce(const SparseVec& v);
  /// Exact projection: v minus its component in the span, over the rationals.
  SparseVec project(const SparseVec& v);

  std::size_t rank() const { return rows_.size(); }
  std::size_t rank_from_tier(int tier) const;
  bool is_pivot(int id);
  /// Row whose pivot has this id, in column order.
  SparseVec row(std::size_t i) const;
  int pivot_id(std::size_t i) const;
  int pivot_tier(std::size_t i) const;

 private:
  using Key = std::uint64_t;
  using Row = std::vector<std::pair<Key, Rational>>;

  Key key(int id);
  Row to_row(const SparseVec& v);
  /// Eliminates pivots from the front; full also clears later pivot columns.
  void eliminate(Row& v, bool full) const;

  TierFn tier_fn_;
  std::unordered_map<int, int> tiers_;
  std::vector<Row> rows_;
  std::unordered_map<Key, std::size_t> pivots_;
};

/// Breadth-first closure of a span under a family of operators.
class Closure {
 public:
  /// Maps a vector to its images under every operator of the family.
  using ExpandFn = std::function<void(const SparseVec& v, const std::function<void(SparseVec)>& emit)>;

  Closure(SpanEngine::TierFn tier, ExpandFn expand, std::size_t max_vectors, int expand_tier = 1);

  void add(const SparseVec& v);
  /// Runs to a fixpoint or to the vector cap.
  void run();

  /// True when the fixpoint was reached below the cap.
  bool saturated() const { return saturated_; }
  SpanEngine& span() { return span_; }

 private:
  SpanEngine span_;
  ExpandFn expand_;
  std::size_t max_vectors_;
  int expand_tier_;
  std::vector<std::size_t> queue_;
  std::size_t head_ = 0;
  bool saturated_ = true;
  bool capped_ = false;
};

}  // namespace wakimoto
