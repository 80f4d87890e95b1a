#pragma once

// Slow, independent reference implementations used only by the tests.

#include <algorithm>
#include <functional>
#include <vector>

#include "awb/finset.hpp"
#include "awb/normmodel.hpp"
#include "awb/ordinal.hpp"
#include "awb/rational.hpp"

namespace oracle {

using awb::FinSet;
using awb::Index;
using awb::Ordinal;
using awb::Rational;

// Every split of F into successive nonempty pieces is tried; no greedy step.
inline bool member(const std::vector<Index>& F, const Ordinal& a) {
  if (F.empty()) return true;
  if (a.is_zero()) return F.size() == 1;
  if (a.kind() == Ordinal::Kind::Limit) {
    for (Index n = 1; n <= F.front(); ++n)
      if (member(F, a.fundamental(n).successor())) return true;
    return false;
  }
  Ordinal z = a.predecessor();
  if (z.is_zero()) return F.size() <= F.front();
  const std::size_t limit = F.front();
  // recursive split: first piece F[0..k), rest split into at most limit-1 pieces
  std::function<bool(std::size_t, std::size_t)> split = [&](std::size_t from, std::size_t pieces_left) -> bool {
    if (from == F.size()) return true;
    if (pieces_left == 0) return false;
    for (std::size_t to = from + 1; to <= F.size(); ++to) {
      std::vector<Index> piece(F.begin() + from, F.begin() + to);
      if (member(piece, z) && split(to, pieces_left - 1)) return true;
    }
    return false;
  };
  return split(0, limit);
}

inline std::vector<FinSet> power_set(Index a, Index b) {
  std::vector<FinSet> out;
  const Index w = b - a + 1;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << w); ++mask) {
    std::vector<Index> s;
    for (Index i = 0; i < w; ++i)
      if (mask >> i & 1) s.push_back(a + i);
    out.push_back(FinSet::from(s));
  }
  return out;
}

inline std::vector<FinSet> subsets(const FinSet& S) {
  std::vector<FinSet> out;
  const std::size_t w = S.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << w); ++mask) {
    std::vector<Index> s;
    for (std::size_t i = 0; i < w; ++i)
      if (mask >> i & 1) s.push_back(S[i]);
    out.push_back(FinSet::from(s));
  }
  return out;
}

// Schreier-space norm straight from the definition: best S_alpha subset of the support.
inline Rational schreier_norm(const awb::SuppVec& x, const Ordinal& a) {
  Rational best;
  for (const auto& F : subsets(x.support())) {
    if (!member(F.elems(), a)) continue;
    Rational s;
    for (Index n : F) s += x.at(n).abs();
    best = awb::max(best, s);
  }
  return best;
}

// Tsirelson norm by plain recursion over all admissible families of intervals of N
// (intervals are cut at integer points between min and max support), no memo.
inline Rational tsirelson_norm(const awb::SuppVec& x, const Rational& theta, const Ordinal& a) {
  if (x.empty()) return 0;
  Rational sup;
  for (const auto& [n, c] : x.coeffs()) sup = awb::max(sup, c.abs());
  if (x.size() == 1) return sup;
  const Index lo = x.min_index(), hi = x.max_index();
  Rational best;
  // cuts: interval family E_1 < ... < E_k determined by start points s_1 < ... < s_k in [lo, hi]
  // with E_t = [s_t, s_{t+1} - 1] and E_k = [s_k, hi]. Starting before lo only lowers min E_1.
  std::vector<Index> starts;
  std::function<void(Index)> rec = [&](Index from) {
    for (Index s = from; s <= hi; ++s) {
      starts.push_back(s);
      if (member(starts, a)) {
        bool whole = starts.size() == 1 && starts[0] == lo;
        if (!whole) {
          Rational total;
          for (std::size_t t = 0; t < starts.size(); ++t) {
            Index e = t + 1 < starts.size() ? starts[t + 1] - 1 : hi;
            total += tsirelson_norm(x.restrict(FinSet::range(starts[t], e)), theta, a);
          }
          best = awb::max(best, total);
        }
        rec(s + 1);
      }
      starts.pop_back();
    }
  };
  rec(lo);
  return awb::max(sup, theta * best);
}

}  // namespace oracle
