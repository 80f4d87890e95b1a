#include "awb/normmodel.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <mutex>
#include <numeric>
#include <set>
#include <shared_mutex>
#include <tuple>
#include <unordered_map>

#include "awb/errors.hpp"
#include "awb/schreier.hpp"

namespace awb {

// ---------------------------------------------------------------------------
// SuppVec

SuppVec SuppVec::from(std::map<Index, Rational> coeffs) {
  SuppVec v;
  for (auto& [n, c] : coeffs) v.set(n, c);
  return v;
}

SuppVec SuppVec::indicator(const FinSet& F, const Rational& c) {
  SuppVec v;
  for (Index n : F) v.set(n, c);
  return v;
}

SuppVec SuppVec::parse(std::string_view text) {
  SuppVec v;
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) return v;
  std::size_t pos = 0;
  while (pos <= t.size()) {
    std::size_t comma = t.find(',', pos);
    if (comma == std::string::npos) comma = t.size();
    std::string tok = t.substr(pos, comma - pos);
    std::size_t colon = tok.find(':');
    if (colon == std::string::npos)
      throw ParseError("vector entry '" + tok + "' is not of the form index:coefficient");
    Index n = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + colon, n);
    if (colon == 0 || ec != std::errc{} || p != tok.data() + colon || n == 0)
      throw ParseError("vector entry '" + tok + "' has a bad index");
    if (v.coeffs_.count(n)) throw ParseError("vector index " + std::to_string(n) + " repeated");
    v.set(n, Rational::parse(tok.substr(colon + 1)));
    pos = comma + 1;
  }
  return v;
}

Rational SuppVec::at(Index n) const {
  auto it = coeffs_.find(n);
  return it == coeffs_.end() ? Rational(0) : it->second;
}

void SuppVec::set(Index n, const Rational& c) {
  if (n == 0) throw PreconditionError("vector indices start at 1");
  if (c.is_zero())
    coeffs_.erase(n);
  else
    coeffs_[n] = c;
}

FinSet SuppVec::support() const {
  std::vector<Index> s;
  s.reserve(coeffs_.size());
  for (const auto& kv : coeffs_) s.push_back(kv.first);
  return FinSet::from(std::move(s));
}

Index SuppVec::min_index() const {
  if (coeffs_.empty()) throw PreconditionError("min of an empty support");
  return coeffs_.begin()->first;
}

Index SuppVec::max_index() const {
  if (coeffs_.empty()) throw PreconditionError("max of an empty support");
  return coeffs_.rbegin()->first;
}

SuppVec SuppVec::restrict(const FinSet& J) const {
  SuppVec r;
  for (const auto& [n, c] : coeffs_)
    if (J.contains(n)) r.coeffs_.emplace(n, c);
  return r;
}

SuppVec SuppVec::scaled(const Rational& c) const {
  SuppVec r;
  if (c.is_zero()) return r;
  for (const auto& [n, v] : coeffs_) r.coeffs_.emplace(n, v * c);
  return r;
}

SuppVec SuppVec::abs() const {
  SuppVec r;
  for (const auto& [n, v] : coeffs_) r.coeffs_.emplace(n, v.abs());
  return r;
}

bool SuppVec::nonnegative() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const auto& kv) { return kv.second.sign() > 0; });
}

SuppVec operator+(const SuppVec& a, const SuppVec& b) {
  SuppVec r = a;
  for (const auto& [n, c] : b.coeffs_) r.set(n, r.at(n) + c);
  return r;
}

std::string SuppVec::str() const {
  std::string s;
  for (const auto& [n, c] : coeffs_) {
    if (!s.empty()) s += ',';
    s += std::to_string(n) + ":" + c.str();
  }
  return s;
}

void check_blocks(const BlockSeq& seq) {
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (seq[i].empty()) throw PreconditionError("block " + std::to_string(i + 1) + " is zero");
    if (i > 0 && !(seq[i - 1].max_index() < seq[i].min_index()))
      throw PreconditionError("blocks " + std::to_string(i) + " and " + std::to_string(i + 1) +
                              " are not successive");
  }
}

SuppVec sum(const BlockSeq& seq) {
  SuppVec s;
  for (const auto& u : seq) s = s + u;
  return s;
}

// ---------------------------------------------------------------------------
// KTree / KPoint

KTree KTree::make_leaf(Index n, int sign) {
  KTree t;
  t.leaf = true;
  t.index = n;
  t.sign = sign < 0 ? -1 : 1;
  return t;
}

KTree KTree::make_node(std::vector<KTree> children) {
  KTree t;
  t.leaf = false;
  t.children = std::move(children);
  return t;
}

FinSet KTree::support() const {
  if (leaf) return FinSet{index};
  std::vector<Index> all;
  for (const auto& c : children)
    for (Index n : c.support()) all.push_back(n);
  return FinSet::from(std::move(all));
}

std::string KTree::encoding() const {
  if (leaf) return (sign < 0 ? "-" : "+") + std::to_string(index);
  std::string s = "[";
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (i) s += ',';
    s += children[i].encoding();
  }
  return s + "]";
}

namespace {

struct TreeParser {
  std::string_view s;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("tree '" + std::string(s) + "' at offset " + std::to_string(pos) + ": " + why);
  }
  KTree parse() {
    if (pos >= s.size()) fail("unexpected end");
    char c = s[pos];
    if (c == '+' || c == '-') {
      ++pos;
      std::size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (start == pos || pos - start > 9) fail("bad leaf index");
      Index n = static_cast<Index>(std::stoul(std::string(s.substr(start, pos - start))));
      if (n == 0) fail("indices start at 1");
      return KTree::make_leaf(n, c == '-' ? -1 : 1);
    }
    if (c != '[') fail("expected '+', '-' or '['");
    ++pos;
    std::vector<KTree> kids;
    if (pos < s.size() && s[pos] == ']') {
      ++pos;
      return KTree::make_node({});
    }
    while (true) {
      kids.push_back(parse());
      if (pos >= s.size()) fail("unterminated node");
      if (s[pos] == ']') {
        ++pos;
        return KTree::make_node(std::move(kids));
      }
      if (s[pos] != ',') fail("expected ',' or ']'");
      ++pos;
    }
  }
};

}  // namespace

KTree KTree::parse(std::string_view text) {
  TreeParser p{text};
  KTree t = p.parse();
  if (p.pos != text.size()) p.fail("trailing characters");
  return t;
}

int KTree::depth() const {
  if (leaf) return 0;
  int d = 0;
  for (const auto& c : children) d = std::max(d, c.depth());
  return d + 1;
}

namespace {

std::map<Index, Rational> tree_values(const KTree& t, const Rational& theta, const Ordinal& alpha) {
  std::map<Index, Rational> vals;
  if (t.leaf) {
    if (t.index == 0) throw PreconditionError("leaf index must be positive");
    vals.emplace(t.index, Rational(t.sign));
    return vals;
  }
  std::vector<Index> minima;
  Index prev_max = 0;
  for (const auto& c : t.children) {
    auto cv = tree_values(c, theta, alpha);
    if (cv.empty()) throw PreconditionError("node child with empty support");
    Index lo = cv.begin()->first, hi = cv.rbegin()->first;
    if (!minima.empty() && !(prev_max < lo))
      throw PreconditionError("node children are not successive");
    minima.push_back(lo);
    prev_max = hi;
    for (auto& [n, v] : cv) vals.emplace(n, v * theta);
  }
  if (!member(FinSet::from(minima), alpha))
    throw PreconditionError("node children minima " + FinSet::from(minima).str() +
                            " are not admissible");
  return vals;
}

}  // namespace

KPoint KPoint::from_set(const SpaceModel& model, FinSet F) {
  if (model.kind() != SpaceModel::Kind::Schreier)
    throw PreconditionError("set points belong to Schreier space models");
  if (!member(F, model.alpha()))
    throw PreconditionError("point " + F.str() + " is not in S_" + model.alpha().str());
  KPoint p;
  for (Index n : F) p.values_.emplace(n, Rational(1));
  p.shape_ = std::move(F);
  return p;
}

KPoint KPoint::from_tree(const SpaceModel& model, KTree tree) {
  if (model.kind() != SpaceModel::Kind::Tsirelson)
    throw PreconditionError("tree points belong to Tsirelson models");
  KPoint p;
  p.values_ = tree_values(tree, model.theta(), model.alpha());
  p.shape_ = std::move(tree);
  return p;
}

Rational KPoint::value(Index n) const {
  auto it = values_.find(n);
  return it == values_.end() ? Rational(0) : it->second;
}

FinSet KPoint::support() const {
  std::vector<Index> s;
  for (const auto& kv : values_) s.push_back(kv.first);
  return FinSet::from(std::move(s));
}

std::string KPoint::encoding() const {
  return is_set() ? set().str() : tree().encoding();
}

Rational pairing(const SuppVec& x, const KPoint& t) {
  Rational s;
  for (const auto& [n, c] : x.coeffs()) s += c * t.value(n);
  return s;
}

Rational pairing_f(const SuppVec& x, const KPoint& t) {
  Rational s;
  for (const auto& [n, c] : x.coeffs()) s += c * t.eval_f(n);
  return s;
}

// ---------------------------------------------------------------------------
// max_weight: exact S_alpha-weighted maximum

namespace {

struct Best {
  Rational value;
  std::vector<std::size_t> positions;  // increasing
};

class WeightSolver {
public:
  WeightSolver(std::vector<Index> idx, std::vector<Rational> w) : idx_(std::move(idx)), w_(std::move(w)) {}

  Best solve(const Ordinal& a, std::size_t lo, std::size_t hi) {
    if (lo >= hi) return {};
    auto key = std::make_tuple(a.str(), lo, hi);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Best b = compute(a, lo, hi);
    memo_.emplace(std::move(key), b);
    return b;
  }

private:
  Best compute(const Ordinal& a, std::size_t lo, std::size_t hi) {
    switch (a.kind()) {
      case Ordinal::Kind::Zero: {
        Best b;
        for (std::size_t p = lo; p < hi; ++p)
          if (b.positions.empty() || w_[p] > b.value) b = Best{w_[p], {p}};
        return b;
      }
      case Ordinal::Kind::Successor:
        return a == Ordinal::finite(1) ? level_one(lo, hi) : successor(a.predecessor(), lo, hi);
      case Ordinal::Kind::Limit:
        break;
    }
    Best best;
    for (Index k = 1; k <= idx_[hi - 1]; ++k) {
      std::size_t p = lo;
      while (p < hi && idx_[p] < k) ++p;
      if (p == hi) break;
      Best b = solve(a.assoc(k), p, hi);
      if (b.value > best.value) best = std::move(b);
    }
    return best;
  }

  // |G| <= min G: a start p plus the (idx[p] - 1) heaviest later entries.
  Best level_one(std::size_t lo, std::size_t hi) {
    Best best;
    for (std::size_t p = lo; p < hi; ++p) {
      std::vector<std::size_t> later(hi - p - 1);
      std::iota(later.begin(), later.end(), p + 1);
      std::stable_sort(later.begin(), later.end(), [&](std::size_t x, std::size_t y) { return w_[x] > w_[y]; });
      std::size_t take = std::min<std::size_t>(later.size(), idx_[p] - 1);
      Best b{w_[p], {p}};
      for (std::size_t i = 0; i < take; ++i) {
        b.value += w_[later[i]];
        b.positions.push_back(later[i]);
      }
      std::sort(b.positions.begin(), b.positions.end());
      if (best.positions.empty() || b.value > best.value) best = std::move(b);
    }
    return best;
  }

  // At most idx[p] successive S_zeta pieces, the first one inside [p, r).
  Best successor(const Ordinal& zeta, std::size_t lo, std::size_t hi) {
    const std::size_t L = hi - lo;
    // g[q][c]: best with at most c pieces, the first taken from [q, r) for some r.
    std::vector<std::vector<Best>> g(L + 1, std::vector<Best>(L + 1));
    for (std::size_t q = hi; q-- > lo;) {
      for (std::size_t c = 1; c <= hi - q; ++c) {
        Best best;
        for (std::size_t r = q + 1; r <= hi; ++r) {
          const Best piece = solve(zeta, q, r);
          Rational v = piece.value;
          const Best* tail = (c > 1 && r < hi) ? &g[r - lo][c - 1] : nullptr;
          if (tail) v += tail->value;
          if (r == q + 1 || v > best.value) {
            best.value = v;
            best.positions = piece.positions;
            if (tail) best.positions.insert(best.positions.end(), tail->positions.begin(), tail->positions.end());
          }
        }
        g[q - lo][c] = std::move(best);
      }
    }
    Best best;
    for (std::size_t p = lo; p < hi; ++p) {
      const Best& cand = g[p - lo][std::min<std::size_t>(idx_[p], hi - p)];
      if (p == lo || cand.value > best.value) best = cand;
    }
    return best;
  }

  std::vector<Index> idx_;
  std::vector<Rational> w_;
  std::map<std::tuple<std::string, std::size_t, std::size_t>, Best> memo_;
};

}  // namespace

WeightMax max_weight(const Ordinal& alpha, const SuppVec& w) {
  if (!w.nonnegative()) throw PreconditionError("max_weight needs non-negative weights");
  std::vector<Index> idx;
  std::vector<Rational> vals;
  for (const auto& [n, c] : w.coeffs()) {
    idx.push_back(n);
    vals.push_back(c);
  }
  if (idx.empty()) return {Rational(0), FinSet{}};
  WeightSolver solver(idx, vals);
  Best b = solver.solve(alpha, 0, idx.size());
  std::vector<Index> G;
  for (std::size_t p : b.positions) G.push_back(idx[p]);
  return {b.value, FinSet::from(std::move(G))};
}

// ---------------------------------------------------------------------------
// Norm cache and Tsirelson recursion

struct NormEntry {
  Rational norm;
  // Schreier: argmax offsets. Tsirelson: {0, leaf offset} or {1, block start offsets...}.
  std::vector<std::uint32_t> choice;
};

struct NormCache {
  std::optional<NormEntry> find(const std::string& key) const {
    std::shared_lock lock(mu);
    auto it = map.find(key);
    if (it == map.end()) return std::nullopt;
    return it->second;
  }
  void insert(const std::string& key, const NormEntry& e) {
    std::unique_lock lock(mu);
    if (map.size() >= kCap) map.clear();
    map.emplace(key, e);
  }
  static constexpr std::size_t kCap = std::size_t{1} << 20;
  mutable std::shared_mutex mu;
  std::unordered_map<std::string, NormEntry> map;
};

namespace {

class SliceSolver {
public:
  SliceSolver(const SpaceModel& model, NormCache& cache, const SuppVec& x)
      : model_(model), cache_(cache) {
    for (const auto& [n, c] : x.coeffs()) {
      idx_.push_back(n);
      w_.push_back(c.abs());
      sign_.push_back(c.sign() < 0 ? -1 : 1);
    }
  }

  std::size_t size() const { return idx_.size(); }

  const NormEntry& solve(std::size_t i, std::size_t j) {
    auto lk = std::make_pair(i, j);
    if (auto it = local_.find(lk); it != local_.end()) return it->second;
    std::string key = slice_key(i, j);
    if (auto hit = cache_.find(key)) return local_.emplace(lk, *hit).first->second;
    NormEntry e = model_.kind() == SpaceModel::Kind::Schreier ? schreier(i, j) : tsirelson(i, j);
    cache_.insert(key, e);
    return local_.emplace(lk, std::move(e)).first->second;
  }

  KPoint point(std::size_t i, std::size_t j) {
    if (model_.kind() == SpaceModel::Kind::Schreier) {
      const NormEntry& e = solve(i, j);
      std::vector<Index> F;
      for (auto off : e.choice) F.push_back(idx_[i + off]);
      return KPoint::from_set(model_, FinSet::from(std::move(F)));
    }
    return KPoint::from_tree(model_, tree(i, j));
  }

private:
  std::string slice_key(std::size_t i, std::size_t j) const {
    std::string k;
    for (std::size_t p = i; p < j; ++p) {
      k += std::to_string(idx_[p]);
      k += ':';
      k += w_[p].str();
      k += ';';
    }
    return k;
  }

  NormEntry schreier(std::size_t i, std::size_t j) {
    std::vector<Index> supp(idx_.begin() + i, idx_.begin() + j);
    NormEntry e;
    if (member(std::span<const Index>(supp), model_.alpha())) {
      for (std::size_t p = i; p < j; ++p) {
        e.norm += w_[p];
        e.choice.push_back(static_cast<std::uint32_t>(p - i));
      }
      return e;
    }
    WeightSolver ws(supp, std::vector<Rational>(w_.begin() + i, w_.begin() + j));
    Best b = ws.solve(model_.alpha(), 0, supp.size());
    e.norm = b.value;
    for (auto p : b.positions) e.choice.push_back(static_cast<std::uint32_t>(p));
    return e;
  }

  // |x| = max(|x|_inf, theta * max sum_j |E_j x|), blocks E_j contiguous in the support
  // with admissible minima. The single block equal to the whole slice is excluded: it can
  // only win when the norm is 0.
  NormEntry tsirelson(std::size_t i, std::size_t j) {
    NormEntry e;
    std::size_t arg = i;
    for (std::size_t p = i; p < j; ++p)
      if (w_[p] > w_[arg]) arg = p;
    e.norm = w_[arg];
    e.choice = {0, static_cast<std::uint32_t>(arg - i)};
    if (j - i == 1) return e;

    Rational part;
    std::vector<std::size_t> starts;
    bool found = model_.alpha() == Ordinal::finite(1) ? partition_level_one(i, j, part, starts)
                                                      : partition_general(i, j, part, starts);
    if (found) {
      Rational v = model_.theta() * part;
      if (v >= e.norm) {
        e.norm = v;
        e.choice = {1};
        for (auto s : starts) e.choice.push_back(static_cast<std::uint32_t>(s - i));
      }
    }
    return e;
  }

  bool partition_level_one(std::size_t i, std::size_t j, Rational& best, std::vector<std::size_t>& starts) {
    const std::size_t L = j - i;
    // H[q][c]: best sum with at most c blocks covering a prefix-closed run from q.
    std::vector<std::vector<Rational>> H(L + 1, std::vector<Rational>(L + 1));
    std::vector<std::vector<std::size_t>> R(L + 1, std::vector<std::size_t>(L + 1, 0));
    std::vector<std::vector<char>> ok(L + 1, std::vector<char>(L + 1, 0));
    for (std::size_t q = j; q-- > i;) {
      for (std::size_t c = 1; c <= j - q; ++c) {
        for (std::size_t r = q + 1; r <= j; ++r) {
          if (q == i && r == j) continue;
          Rational v = solve(q, r).norm;
          if (c > 1 && r < j) {
            if (!ok[r - i][c - 1]) continue;
            v += H[r - i][c - 1];
          }
          if (!ok[q - i][c] || v > H[q - i][c]) {
            ok[q - i][c] = 1;
            H[q - i][c] = v;
            R[q - i][c] = r;
          }
        }
      }
    }
    bool found = false;
    std::size_t bs = i, bc = 0;
    for (std::size_t s = i; s < j; ++s) {
      std::size_t c = std::min<std::size_t>(idx_[s], j - s);
      if (!ok[s - i][c]) continue;
      if (!found || H[s - i][c] > best) {
        found = true;
        best = H[s - i][c];
        bs = s;
        bc = c;
      }
    }
    if (!found) return false;
    starts.clear();
    std::size_t q = bs, c = bc;
    while (true) {
      starts.push_back(q);
      std::size_t r = R[q - i][c];
      if (r >= j || c == 1) break;
      q = r;
      --c;
    }
    return true;
  }

  bool partition_general(std::size_t i, std::size_t j, Rational& best, std::vector<std::size_t>& starts) {
    bool found = false;
    std::vector<std::size_t> cur;
    std::vector<Index> minima;
    auto evaluate = [&]() {
      if (cur.size() == 1 && cur[0] == i) return;
      Rational v;
      for (std::size_t t = 0; t < cur.size(); ++t)
        v += solve(cur[t], t + 1 < cur.size() ? cur[t + 1] : j).norm;
      if (!found || v > best) {
        found = true;
        best = v;
        starts = cur;
      }
    };
    auto dfs = [&](auto&& self, std::size_t from) -> void {
      for (std::size_t s = from; s < j; ++s) {
        cur.push_back(s);
        minima.push_back(idx_[s]);
        if (member(std::span<const Index>(minima), model_.alpha())) {
          evaluate();
          self(self, s + 1);
        }
        cur.pop_back();
        minima.pop_back();
      }
    };
    dfs(dfs, i);
    return found;
  }

  KTree tree(std::size_t i, std::size_t j) {
    const NormEntry e = solve(i, j);
    if (e.choice[0] == 0) {
      std::size_t p = i + e.choice[1];
      return KTree::make_leaf(idx_[p], sign_[p]);
    }
    std::vector<KTree> kids;
    for (std::size_t t = 1; t < e.choice.size(); ++t) {
      std::size_t s = i + e.choice[t];
      std::size_t end = t + 1 < e.choice.size() ? i + e.choice[t + 1] : j;
      kids.push_back(tree(s, end));
    }
    return KTree::make_node(std::move(kids));
  }

  const SpaceModel& model_;
  NormCache& cache_;
  std::vector<Index> idx_;
  std::vector<Rational> w_;
  std::vector<int> sign_;
  std::map<std::pair<std::size_t, std::size_t>, NormEntry> local_;
};

}  // namespace

SpaceModel SpaceModel::schreier(const Ordinal& alpha) {
  if (alpha.is_zero()) throw PreconditionError("Schreier space models need alpha >= 1");
  SpaceModel m;
  m.kind_ = Kind::Schreier;
  m.alpha_ = alpha;
  m.theta_ = Rational(1);
  m.a1_constant_ = Rational(1, 2);
  m.cache_ = std::make_shared<NormCache>();
  return m;
}

SpaceModel SpaceModel::tsirelson(const Rational& theta, const Ordinal& alpha) {
  if (theta.sign() <= 0 || theta >= Rational(1))
    throw PreconditionError("Tsirelson theta must lie in (0,1)");
  if (alpha.is_zero()) throw PreconditionError("Tsirelson admissibility needs alpha >= 1");
  SpaceModel m;
  m.kind_ = Kind::Tsirelson;
  m.alpha_ = alpha;
  m.theta_ = theta;
  m.a1_constant_ = theta;
  m.cache_ = std::make_shared<NormCache>();
  return m;
}

std::string SpaceModel::key() const {
  if (kind_ == Kind::Schreier) return "schreier(alpha=" + alpha_.str() + ")";
  return "tsirelson(theta=" + theta_.str() + ",alpha=" + alpha_.str() + ")";
}

Rational SpaceModel::norm(const SuppVec& x) const {
  if (x.empty()) return Rational(0);
  SliceSolver s(*this, *cache_, x);
  return s.solve(0, s.size()).norm;
}

KPoint SpaceModel::norming_point(const SuppVec& x) const {
  if (x.empty()) {
    if (kind_ == Kind::Schreier) return KPoint::from_set(*this, FinSet{});
    return KPoint::from_tree(*this, KTree::make_node({}));
  }
  SliceSolver s(*this, *cache_, x);
  return s.point(0, s.size());
}

// ---------------------------------------------------------------------------
// K enumeration

namespace {

std::string functional_key(const KPoint& p) {
  std::string k;
  for (const auto& [n, v] : p.functional()) k += std::to_string(n) + ":" + v.str() + ";";
  return k;
}

}  // namespace

std::vector<KPoint> kpoints(const SpaceModel& model, Index a, Index b, int depth, const Budget& budget) {
  if (a < 1 || b < a) throw PreconditionError("window must satisfy 1 <= a <= b");
  if (static_cast<std::size_t>(b - a) + 1 > budget.max_window)
    throw ResourceError("kpoint window exceeds budget " + std::to_string(budget.max_window));
  std::vector<KPoint> out;
  if (model.kind() == SpaceModel::Kind::Schreier) {
    for (auto& F : enumerate(model.alpha(), a, b, EnumMode::All, budget))
      out.push_back(KPoint::from_set(model, std::move(F)));
    std::sort(out.begin(), out.end(), [](const KPoint& x, const KPoint& y) { return x.encoding() < y.encoding(); });
    return out;
  }
  std::map<std::string, KPoint> by_functional;
  auto add = [&](KPoint p) {
    std::string fk = functional_key(p);
    auto it = by_functional.find(fk);
    if (it == by_functional.end())
      by_functional.emplace(std::move(fk), std::move(p));
    else if (p.encoding() < it->second.encoding())
      it->second = std::move(p);
    if (by_functional.size() > budget.max_results)
      throw ResourceError("kpoint enumeration exceeds " + std::to_string(budget.max_results) + " points");
  };
  for (Index n = a; n <= b; ++n) {
    add(KPoint::from_tree(model, KTree::make_leaf(n, 1)));
    add(KPoint::from_tree(model, KTree::make_leaf(n, -1)));
  }
  for (int d = 1; d <= depth; ++d) {
    std::vector<KPoint> pool;
    for (const auto& kv : by_functional) pool.push_back(kv.second);
    std::sort(pool.begin(), pool.end(), [](const KPoint& x, const KPoint& y) {
      Index mx = x.support().min(), my = y.support().min();
      return mx != my ? mx < my : x.encoding() < y.encoding();
    });
    std::vector<KTree> kids;
    std::vector<Index> minima;
    auto dfs = [&](auto&& self, std::size_t from, Index prev_max) -> void {
      for (std::size_t i = from; i < pool.size(); ++i) {
        FinSet s = pool[i].support();
        if (!kids.empty() && s.min() <= prev_max) continue;
        minima.push_back(s.min());
        if (member(std::span<const Index>(minima), model.alpha())) {
          kids.push_back(pool[i].tree());
          add(KPoint::from_tree(model, KTree::make_node(kids)));
          self(self, i + 1, s.max());
          kids.pop_back();
        }
        minima.pop_back();
      }
    };
    dfs(dfs, 0, 0);
  }
  for (auto& kv : by_functional) out.push_back(std::move(kv.second));
  std::sort(out.begin(), out.end(), [](const KPoint& x, const KPoint& y) { return x.encoding() < y.encoding(); });
  return out;
}

// ---------------------------------------------------------------------------
// Asymptotic-l1 checks

A1Check check_a1(const SpaceModel& model, const BlockSeq& seq) {
  if (seq.empty()) throw PreconditionError("check_a1 needs at least one block");
  check_blocks(seq);
  if (seq.size() > seq.front().min_index())
    throw PreconditionError("inadmissible: " + std::to_string(seq.size()) + " blocks but min supp u_1 = " +
                            std::to_string(seq.front().min_index()));
  Rational denom;
  for (const auto& u : seq) denom += model.norm(u);
  Rational ratio = model.norm(sum(seq)) / denom;
  return {ratio, ratio >= model.a1_constant()};
}

A1Search a1_search(const SpaceModel& model, Index a, Index b, const std::vector<Rational>& grid,
                   const Budget& budget, std::size_t min_blocks) {
  if (a < 1 || b < a) throw PreconditionError("window must satisfy 1 <= a <= b");
  std::vector<Rational> g;
  for (const auto& r : grid)
    if (!r.is_zero() && std::find(g.begin(), g.end(), r) == g.end()) g.push_back(r);
  if (g.empty()) throw PreconditionError("coefficient grid has no nonzero entry");
  const std::size_t W = static_cast<std::size_t>(b - a) + 1;
  if (W > budget.max_window)
    throw ResourceError("a1 search window exceeds budget " + std::to_string(budget.max_window));
  min_blocks = std::max<std::size_t>(min_blocks, 1);

  A1Search res;
  std::vector<std::size_t> digit(W, 0);
  auto advance = [&]() {
    for (std::size_t p = W; p-- > 0;) {
      if (++digit[p] <= g.size()) return true;
      digit[p] = 0;
    }
    return false;
  };
  while (advance()) {
    if (res.vectors_evaluated >= budget.max_evaluations) {
      res.partial = true;
      break;
    }
    std::vector<Index> idx;
    std::vector<Rational> val;
    for (std::size_t p = 0; p < W; ++p)
      if (digit[p]) {
        idx.push_back(a + static_cast<Index>(p));
        val.push_back(g[digit[p] - 1]);
      }
    const std::size_t k = idx.size();
    const std::size_t hi = std::min<std::size_t>(idx[0], k);
    if (min_blocks > hi) continue;
    ++res.vectors_evaluated;
    auto slice = [&](std::size_t p, std::size_t r) {
      SuppVec v;
      for (std::size_t q = p; q < r; ++q) v.set(idx[q], val[q]);
      return v;
    };
    Rational total = model.norm(slice(0, k));
    std::vector<std::vector<Rational>> N(k + 1, std::vector<Rational>(k + 1));
    for (std::size_t p = 0; p < k; ++p)
      for (std::size_t r = p + 1; r <= k; ++r) N[p][r] = model.norm(slice(p, r));
    // F[p][c]: max sum of block norms covering [p, k) with exactly c blocks.
    std::vector<std::vector<std::optional<Rational>>> F(k + 1, std::vector<std::optional<Rational>>(hi + 1));
    std::vector<std::vector<std::size_t>> cut(k + 1, std::vector<std::size_t>(hi + 1, 0));
    F[k][0] = Rational(0);
    for (std::size_t p = k; p-- > 0;)
      for (std::size_t c = 1; c <= hi; ++c)
        for (std::size_t r = p + 1; r <= k; ++r) {
          if (!F[r][c - 1]) continue;
          Rational v = N[p][r] + *F[r][c - 1];
          if (!F[p][c] || v > *F[p][c]) {
            F[p][c] = v;
            cut[p][c] = r;
          }
        }
    for (std::size_t m = min_blocks; m <= hi; ++m) {
      if (!F[0][m]) continue;
      Rational ratio = total / *F[0][m];
      if (!res.worst_ratio || ratio < *res.worst_ratio) {
        res.worst_ratio = ratio;
        res.witness.clear();
        std::size_t p = 0, c = m;
        while (c > 0) {
          std::size_t r = cut[p][c];
          res.witness.push_back(slice(p, r));
          p = r;
          --c;
        }
      }
    }
  }
  res.violates_declared = res.worst_ratio && *res.worst_ratio < model.a1_constant();
  return res;
}

SignTransfer sign_transfer(const SpaceModel& model, const BlockSeq& seq) {
  SignTransfer out;
  if (seq.empty()) return out;
  check_blocks(seq);
  for (const auto& u : seq)
    if (!u.nonnegative()) throw PreconditionError("sign transfer needs non-negative blocks");
  SuppVec usum, vsum;
  for (const auto& u : seq) {
    KPoint t = model.norming_point(u);
    SuppVec v;
    for (const auto& [j, a] : u.coeffs()) v.set(j, t.value(j).sign() < 0 ? -a : a);
    Rational nu = model.norm(u);
    if (model.norm(v) != nu || pairing(v, t) != nu)
      throw SearchFailure("no exact norming point found for block " + u.str());
    usum = usum + u;
    vsum = vsum + v;
    out.signed_blocks.push_back(std::move(v));
    out.points.push_back(std::move(t));
  }
  if (model.norm(vsum) > model.norm(usum))
    throw std::logic_error("sign transfer increased the norm of the sum");
  return out;
}

}  // namespace awb
