#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace awb {

using Index = std::uint32_t;

/// Finite set of positive integers, stored strictly increasing.
class FinSet {
public:
  FinSet() = default;
  FinSet(std::initializer_list<Index> elems);
  /// Sorts and deduplicates; throws PreconditionError on a 0 entry.
  static FinSet from(std::vector<Index> elems);
  /// The interval [a, b] (empty when b < a).
  static FinSet range(Index a, Index b);
  /// Parses "{}", "{2,3,5}" or "2,3,5". Whitespace is ignored.
  static FinSet parse(std::string_view text);

  const std::vector<Index>& elems() const { return elems_; }
  std::span<const Index> view() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  Index min() const;
  Index max() const;
  Index operator[](std::size_t i) const { return elems_[i]; }
  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }

  bool contains(Index n) const;
  bool subset_of(const FinSet& other) const;
  /// max(this) < min(other); vacuous when either side is empty.
  bool precedes(const FinSet& other) const;

  FinSet intersect(const FinSet& other) const;
  FinSet unite(const FinSet& other) const;
  FinSet minus(const FinSet& other) const;
  FinSet with(Index n) const;

  std::string str() const;

  /// Lexicographic order on the increasing element lists.
  friend std::strong_ordering operator<=>(const FinSet& a, const FinSet& b) {
    return a.elems_ <=> b.elems_;
  }
  friend bool operator==(const FinSet& a, const FinSet& b) = default;

private:
  std::vector<Index> elems_;
};

/// Order by size, then lexicographically.
bool shortlex_less(const FinSet& a, const FinSet& b);

}  // namespace awb
