#include "awb/schreier.hpp"

#include <algorithm>
#include <limits>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "awb/errors.hpp"

namespace awb {

namespace {

// Answers for infinite alpha are memoized; finite levels are cheap to recompute.
class MembershipCache {
public:
  std::optional<bool> find(const std::string& key) const {
    std::shared_lock lock(mu_);
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }
  void insert(std::string key, bool value) {
    std::unique_lock lock(mu_);
    if (map_.size() >= kCap) map_.clear();
    map_.emplace(std::move(key), value);
  }
  void clear() {
    std::unique_lock lock(mu_);
    map_.clear();
  }

private:
  static constexpr std::size_t kCap = std::size_t{1} << 21;
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, bool> map_;
};

MembershipCache& cache() {
  static MembershipCache c;
  return c;
}

std::string cache_key(std::span<const Index> F, const Ordinal& alpha) {
  std::string k = alpha.str();
  k += '|';
  for (Index x : F) {
    k += std::to_string(x);
    k += ',';
  }
  return k;
}

bool member_rec(std::span<const Index> F, const Ordinal& alpha);

bool successor_member(std::span<const Index> F, const Ordinal& zeta) {
  const std::size_t n = F.size();
  const std::size_t limit = F[0];
  std::size_t pos = 0, pieces = 0;
  bool greedy_ok = true;
  while (pos < n) {
    std::size_t len = 0;
    while (pos + len < n && member_rec(F.subspan(pos, len + 1), zeta)) ++len;
    if (len == 0 || ++pieces > limit) {
      greedy_ok = false;
      break;
    }
    pos += len;
  }
  if (greedy_ok) return true;
  return min_pieces_exhaustive(F, zeta) <= limit;
}

bool member_uncached(std::span<const Index> F, const Ordinal& alpha) {
  switch (alpha.kind()) {
    case Ordinal::Kind::Zero:
      return F.size() <= 1;
    case Ordinal::Kind::Successor: {
      if (alpha == Ordinal::finite(1)) return F.size() <= F[0];
      return successor_member(F, alpha.predecessor());
    }
    case Ordinal::Kind::Limit:
      break;
  }
  for (Index k = 1; k <= F[0]; ++k)
    if (member_rec(F, alpha.assoc(k))) return true;
  return false;
}

bool member_rec(std::span<const Index> F, const Ordinal& alpha) {
  if (F.empty()) return true;
  if (F.size() == 1) return true;  // singletons lie in S_0, contained in every S_alpha
  if (alpha.is_finite()) return member_uncached(F, alpha);
  std::string key = cache_key(F, alpha);
  if (auto hit = cache().find(key)) return *hit;
  bool v = member_uncached(F, alpha);
  cache().insert(std::move(key), v);
  return v;
}

void check_increasing(std::span<const Index> F) {
  for (std::size_t i = 0; i < F.size(); ++i)
    if (F[i] == 0 || (i > 0 && F[i] <= F[i - 1]))
      throw PreconditionError("set elements must be positive and strictly increasing");
}

}  // namespace

bool member(std::span<const Index> F, const Ordinal& alpha) {
  check_increasing(F);
  return member_rec(F, alpha);
}

bool member(const FinSet& F, const Ordinal& alpha) { return member_rec(F.view(), alpha); }

std::size_t min_pieces_exhaustive(std::span<const Index> F, const Ordinal& zeta) {
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  const std::size_t n = F.size();
  std::vector<std::size_t> best(n + 1, kNone);
  best[n] = 0;
  for (std::size_t p = n; p-- > 0;) {
    for (std::size_t q = p + 1; q <= n; ++q) {
      if (best[q] == kNone) continue;
      if (!member_rec(F.subspan(p, q - p), zeta)) continue;
      best[p] = std::min(best[p], best[q] + 1);
    }
  }
  return best[0];
}

Maximality is_maximal(const FinSet& F, const Ordinal& alpha) {
  if (F.empty()) throw PreconditionError("is_maximal needs a nonempty set");
  if (!member(F, alpha)) return Maximality::NotMember;
  return member(F.with(F.max() + 1), alpha) ? Maximality::NotMaximal : Maximality::Maximal;
}

std::vector<FinSet> enumerate_in(const Ordinal& alpha, const FinSet& ground, EnumMode mode,
                                 const Budget& budget) {
  if (ground.size() > budget.max_window)
    throw ResourceError("enumeration window of " + std::to_string(ground.size()) +
                        " elements exceeds budget " + std::to_string(budget.max_window));
  std::vector<FinSet> out;
  std::vector<Index> cur;
  const auto& g = ground.elems();
  auto dfs = [&](auto&& self, std::size_t from) -> void {
    if (out.size() >= budget.max_results)
      throw ResourceError("enumeration produced more than " + std::to_string(budget.max_results) +
                          " sets");
    out.push_back(FinSet::from(cur));
    for (std::size_t i = from; i < g.size(); ++i) {
      cur.push_back(g[i]);
      if (member_rec(cur, alpha)) self(self, i + 1);
      cur.pop_back();
    }
  };
  dfs(dfs, 0);
  if (mode == EnumMode::MaximalInWindow) {
    std::vector<FinSet> maximal;
    for (const auto& F : out) {
      bool extendable = false;
      for (Index x : g) {
        if (F.contains(x)) continue;
        if (member(F.with(x), alpha)) {
          extendable = true;
          break;
        }
      }
      if (!extendable) maximal.push_back(F);
    }
    out = std::move(maximal);
  }
  std::sort(out.begin(), out.end(), shortlex_less);
  return out;
}

std::vector<FinSet> enumerate(const Ordinal& alpha, Index a, Index b, EnumMode mode,
                              const Budget& budget) {
  if (a < 1 || b < a) throw PreconditionError("window must satisfy 1 <= a <= b");
  if (static_cast<std::size_t>(b - a) + 1 > budget.max_window)
    throw ResourceError("enumeration window [" + std::to_string(a) + "," + std::to_string(b) +
                        "] exceeds budget " + std::to_string(budget.max_window));
  return enumerate_in(alpha, FinSet::range(a, b), mode, budget);
}

ExplicitFamily::ExplicitFamily(std::vector<FinSet> sets) {
  std::set<FinSet> all(sets.begin(), sets.end());
  for (const auto& F : all) {
    for (Index x : F) {
      if (!all.count(F.minus(FinSet{x})))
        throw PreconditionError("explicit family is not hereditary: " + F.str() + " lacks subset " +
                                F.minus(FinSet{x}).str());
    }
  }
  if (all.empty()) throw PreconditionError("explicit family must contain the empty set");
  sets_.assign(all.begin(), all.end());
  std::sort(sets_.begin(), sets_.end(), shortlex_less);
}

ExplicitFamily ExplicitFamily::closure(const std::vector<FinSet>& generators, const Budget& budget) {
  std::set<FinSet> all;
  std::vector<FinSet> stack(generators.begin(), generators.end());
  stack.push_back(FinSet{});
  while (!stack.empty()) {
    FinSet F = std::move(stack.back());
    stack.pop_back();
    if (!all.insert(F).second) continue;
    if (all.size() > budget.max_results)
      throw ResourceError("hereditary closure exceeds " + std::to_string(budget.max_results) + " sets");
    for (Index x : F) stack.push_back(F.minus(FinSet{x}));
  }
  ExplicitFamily fam;
  fam.sets_.assign(all.begin(), all.end());
  std::sort(fam.sets_.begin(), fam.sets_.end(), shortlex_less);
  return fam;
}

bool ExplicitFamily::contains(const FinSet& F) const {
  return std::binary_search(sets_.begin(), sets_.end(), F, shortlex_less);
}

ExplicitFamily restrict_family(const FamilyHandle& fam, const FinSet& M, const Budget& budget) {
  if (const auto* ex = std::get_if<ExplicitFamily>(&fam)) {
    std::vector<FinSet> cut;
    for (const auto& F : ex->sets()) cut.push_back(F.intersect(M));
    return ExplicitFamily(std::move(cut));
  }
  const auto& sf = std::get<SchreierFamily>(fam);
  if (!sf.window)
    throw PreconditionError("restricting a Schreier family needs a window bound");
  auto [a, b] = *sf.window;
  if (a < 1 || b < a) throw PreconditionError("window must satisfy 1 <= a <= b");
  // Hereditary: {F n M : F in S_alpha, F in W} is exactly the S_alpha subsets of W n M.
  FinSet ground = FinSet::range(a, b).intersect(M);
  return ExplicitFamily(enumerate_in(sf.alpha, ground, EnumMode::All, budget));
}

ThresholdResult threshold(const Ordinal& xi, const Ordinal& eta, Index width, Index max_n,
                          const Budget& budget) {
  if (!(xi < eta)) throw PreconditionError("threshold needs xi < eta");
  if (static_cast<std::size_t>(width) + 1 > budget.max_window)
    throw ResourceError("threshold window width " + std::to_string(width) + " exceeds budget " +
                        std::to_string(budget.max_window));
  for (Index n = 1; n <= max_n; ++n) {
    std::vector<Index> cur;
    bool ok = true;
    auto dfs = [&](auto&& self, Index from) -> void {
      for (Index x = from; ok && x <= n + width; ++x) {
        cur.push_back(x);
        if (member_rec(cur, xi)) {
          if (!member_rec(cur, eta))
            ok = false;
          else
            self(self, x + 1);
        }
        cur.pop_back();
      }
    };
    dfs(dfs, n);
    if (ok) return {n, n + width};
  }
  throw SearchFailure("no threshold n <= " + std::to_string(max_n) + " found for S_" + xi.str() +
                      " into S_" + eta.str());
}

void clear_membership_cache() { cache().clear(); }

}  // namespace awb
