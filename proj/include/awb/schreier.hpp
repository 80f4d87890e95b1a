#pragma once

#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "awb/budget.hpp"
#include "awb/finset.hpp"
#include "awb/ordinal.hpp"

namespace awb {

/// F in S_alpha, using the canonical associated sequences for limit alpha.
bool member(const FinSet& F, const Ordinal& alpha);
bool member(std::span<const Index> F, const Ordinal& alpha);

/// Minimum number of successive S_zeta pieces covering F, found by exhaustive
/// split search. Exposed for the greedy-versus-exhaustive cross check.
std::size_t min_pieces_exhaustive(std::span<const Index> F, const Ordinal& zeta);

enum class Maximality { Maximal, NotMaximal, NotMember };

/// Tests F u {max F + 1}; see the spreading property test for the justification.
Maximality is_maximal(const FinSet& F, const Ordinal& alpha);

enum class EnumMode { All, MaximalInWindow };

/// S_alpha subsets of [a, b] in shortlex order (size, then lexicographic).
std::vector<FinSet> enumerate(const Ordinal& alpha, Index a, Index b, EnumMode mode,
                              const Budget& budget = {});
/// S_alpha subsets of an arbitrary finite ground set, shortlex order.
std::vector<FinSet> enumerate_in(const Ordinal& alpha, const FinSet& ground, EnumMode mode,
                                 const Budget& budget = {});

struct SchreierFamily {
  Ordinal alpha;
  std::optional<std::pair<Index, Index>> window;
};

class ExplicitFamily {
public:
  /// Throws PreconditionError unless the list is closed under subsets.
  explicit ExplicitFamily(std::vector<FinSet> sets);
  /// Smallest hereditary family containing the given sets.
  static ExplicitFamily closure(const std::vector<FinSet>& generators, const Budget& budget = {});

  const std::vector<FinSet>& sets() const { return sets_; }
  bool contains(const FinSet& F) const;

private:
  ExplicitFamily() = default;
  std::vector<FinSet> sets_;  // shortlex order, no duplicates
};

using FamilyHandle = std::variant<SchreierFamily, ExplicitFamily>;

/// The family {F n M : F in fam}. Schreier handles need a window.
ExplicitFamily restrict_family(const FamilyHandle& fam, const FinSet& M, const Budget& budget = {});

struct ThresholdResult {
  Index n;
  Index verified_up_to;
};

/// Least n <= max_n such that every F in S_xi inside [n, n + width] lies in S_eta.
ThresholdResult threshold(const Ordinal& xi, const Ordinal& eta, Index width, Index max_n = 64,
                          const Budget& budget = {});

/// Drops all memoized membership answers.
void clear_membership_cache();

}  // namespace awb
