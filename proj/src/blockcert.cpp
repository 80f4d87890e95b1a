#include "awb/blockcert.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <random>
#include <thread>

#include "awb/errors.hpp"
#include "awb/schreier.hpp"

namespace awb {

// ---------------------------------------------------------------------------
// EpsSeq

EpsSeq::EpsSeq(std::vector<Rational> prefix, std::optional<std::pair<Rational, Rational>> tail)
    : prefix_(std::move(prefix)), tail_(std::move(tail)) {
  for (const auto& e : prefix_)
    if (e.sign() <= 0) throw PreconditionError("sequence entries must be positive");
  if (tail_ && (tail_->first.sign() <= 0 || tail_->second.sign() <= 0))
    throw PreconditionError("geometric tail needs positive first term and ratio");
  if (prefix_.empty() && !tail_) throw PreconditionError("empty sequence");
}

EpsSeq EpsSeq::default_seq() { return EpsSeq({}, std::make_pair(Rational(1, 16), Rational(1, 4))); }

EpsSeq EpsSeq::desk() {
  Rational big = Rational(99, 200).pow(2);
  return EpsSeq({big, big}, std::make_pair(Rational(1, 400).pow(2), Rational(1, 4)));
}

EpsSeq EpsSeq::parse(std::string_view text) {
  std::string t;
  for (char c : text)
    if (c != ' ') t += c;
  if (t == "default") return default_seq();
  if (t == "desk") return desk();
  std::vector<Rational> prefix;
  std::optional<std::pair<Rational, Rational>> tail;
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
      std::size_t q = s.find(sep, pos);
      out.push_back(s.substr(pos, q == std::string::npos ? std::string::npos : q - pos));
      if (q == std::string::npos) break;
      pos = q + 1;
    }
    return out;
  };
  for (const auto& part : split(t, ';')) {
    if (part.rfind("geom:", 0) == 0) {
      auto fr = split(part.substr(5), ',');
      if (fr.size() != 2 || tail) throw ParseError("sequence '" + t + "': bad geometric tail");
      tail = std::make_pair(Rational::parse(fr[0]), Rational::parse(fr[1]));
    } else {
      if (tail) throw ParseError("sequence '" + t + "': explicit terms after the tail");
      for (const auto& x : split(part, ',')) prefix.push_back(Rational::parse(x));
    }
  }
  try {
    return EpsSeq(std::move(prefix), std::move(tail));
  } catch (const PreconditionError& e) {
    throw ParseError("sequence '" + t + "': " + e.what());
  }
}

Rational EpsSeq::at(std::size_t n) const {
  if (n == 0) throw PreconditionError("sequences are indexed from 1");
  if (n <= prefix_.size()) return prefix_[n - 1];
  if (!tail_) throw PreconditionError("sequence has no term " + std::to_string(n));
  return tail_->first * tail_->second.pow(static_cast<unsigned>(n - 1 - prefix_.size()));
}

bool EpsSeq::decreasing() const {
  for (std::size_t i = 1; i < prefix_.size(); ++i)
    if (prefix_[i] > prefix_[i - 1]) return false;
  if (tail_) {
    if (tail_->second > Rational(1)) return false;
    if (!prefix_.empty() && tail_->first > prefix_.back()) return false;
  }
  return true;
}

bool EpsSeq::perfect_squares() const {
  Rational r;
  for (const auto& e : prefix_)
    if (!e.exact_sqrt(r)) return false;
  return !tail_ || (tail_->first.exact_sqrt(r) && tail_->second.exact_sqrt(r));
}

std::optional<Rational> EpsSeq::root_sum() const {
  if (!perfect_squares()) throw PreconditionError("sequence entries are not squares of rationals");
  Rational s, r;
  for (const auto& e : prefix_) {
    e.exact_sqrt(r);
    s += r;
  }
  if (tail_) {
    Rational rf, rr;
    tail_->first.exact_sqrt(rf);
    tail_->second.exact_sqrt(rr);
    if (rr >= Rational(1)) return std::nullopt;
    s += rf / (Rational(1) - rr);
  }
  return s;
}

std::string EpsSeq::str() const {
  std::string s;
  for (std::size_t i = 0; i < prefix_.size(); ++i) {
    if (i) s += ',';
    s += prefix_[i].str();
  }
  if (tail_) {
    if (!s.empty()) s += ';';
    s += "geom:" + tail_->first.str() + "," + tail_->second.str();
  }
  return s;
}

std::string Verdict::label() const {
  switch (kind) {
    case VerdictKind::Pass: return "pass";
    case VerdictKind::Structure: return "structure";
    case VerdictKind::Condition1: return "1";
    case VerdictKind::Condition2: return "2";
    case VerdictKind::Condition3: return "3";
    case VerdictKind::Eps: return "eps";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// (alpha, eps) verification

namespace {

Verdict fail(VerdictKind k, FinSet J, std::string detail) { return Verdict{k, std::move(J), std::move(detail)}; }

KPoint revalidate(const SpaceModel& model, const KPoint& t) {
  if (t.is_set()) return KPoint::from_set(model, t.set());
  return KPoint::from_tree(model, t.tree());
}

struct BlockView {
  std::vector<Index> idx;
  std::vector<Rational> lam, ft;

  FinSet set_of(std::uint32_t mask) const {
    std::vector<Index> s;
    for (std::size_t p = 0; p < idx.size(); ++p)
      if (mask >> p & 1) s.push_back(idx[p]);
    return FinSet::from(std::move(s));
  }
  SuppVec vec_of(std::uint32_t mask) const {
    SuppVec v;
    for (std::size_t p = 0; p < idx.size(); ++p)
      if (mask >> p & 1) v.set(idx[p], lam[p]);
    return v;
  }
  Rational paired(std::uint32_t mask) const {
    Rational s;
    for (std::size_t p = 0; p < idx.size(); ++p)
      if (mask >> p & 1) s += lam[p] * ft[p];
    return s;
  }
};

void keep_least(std::optional<FinSet>& best, FinSet J) {
  if (!best || shortlex_less(J, *best)) best = std::move(J);
}

}  // namespace

Verdict verify_alpha_eps(const AlphaEpsCert& cert, const Budget& budget, bool prune) {
  const auto& u = cert.u;
  if (u.empty()) return fail(VerdictKind::Structure, {}, "block is zero");
  if (!u.nonnegative()) return fail(VerdictKind::Structure, {}, "block has a non-positive coefficient");
  if (cert.eps.base().sign() <= 0 || cert.eps.base() >= Rational(1))
    return fail(VerdictKind::Structure, {}, "eps must lie in (0,1)");
  if (cert.model.norm(u) != Rational(1))
    return fail(VerdictKind::Structure, {}, "block is not normalized: norm " + cert.model.norm(u).str());
  KPoint t0 = [&] {
    try {
      return revalidate(cert.model, cert.t0);
    } catch (const PreconditionError& e) {
      throw PreconditionError(std::string("t0 is not a point of the model: ") + e.what());
    }
  }();
  if (u.size() > budget.max_support)
    throw ResourceError("support of " + std::to_string(u.size()) + " elements exceeds the exhaustive budget of " +
                        std::to_string(budget.max_support));

  BlockView b;
  for (const auto& [n, c] : u.coeffs()) {
    b.idx.push_back(n);
    b.lam.push_back(c);
    b.ft.push_back(t0.eval_f(n));
  }
  const std::size_t n = b.idx.size();
  const std::uint32_t full = n == 32 ? ~0u : ((1u << n) - 1);
  const SpaceModel& model = cert.model;
  const RootParam& eps = cert.eps;

  auto violates1 = [&](std::uint32_t mask, const Rational& nm) {
    return !eps.one_plus_times_at_least(nm, b.paired(mask));
  };

  // Condition 1: every J with |u|J| >= eps is (1+eps)-normed by t0.
  std::optional<FinSet> bad1;
  if (prune) {
    if (violates1(full, Rational(1))) keep_least(bad1, b.set_of(full));
    auto subtree = [&](std::uint32_t start_mask, std::size_t from, std::optional<FinSet>& best) {
      auto visit = [&](auto&& self, std::uint32_t mask, std::size_t from2) -> void {
        for (std::size_t p = from2; p < n; ++p) {
          std::uint32_t m2 = mask & ~(1u << p);
          Rational nm = model.norm(b.vec_of(m2));
          if (eps.greater_than(nm)) continue;  // every subset is smaller still
          if (violates1(m2, nm)) keep_least(best, b.set_of(m2));
          self(self, m2, p + 1);
        }
      };
      visit(visit, start_mask, from);
    };
    // Top-level branches (remove position p first) are independent subtrees.
    std::vector<std::optional<FinSet>> per_branch(n);
    auto run_branch = [&](std::size_t p) {
      std::uint32_t m2 = full & ~(1u << p);
      Rational nm = model.norm(b.vec_of(m2));
      if (eps.greater_than(nm)) return;
      if (violates1(m2, nm)) keep_least(per_branch[p], b.set_of(m2));
      subtree(m2, p + 1, per_branch[p]);
    };
    unsigned threads = std::max(1u, budget.threads);
    if (threads == 1 || n < 2) {
      for (std::size_t p = 0; p < n; ++p) run_branch(p);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      std::exception_ptr err;
      std::mutex err_mu;
      for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
          try {
            for (std::size_t p; (p = next++) < n;) run_branch(p);
          } catch (...) {
            std::lock_guard g(err_mu);
            err = std::current_exception();
          }
        });
      for (auto& th : pool) th.join();
      if (err) std::rethrow_exception(err);
    }
    for (auto& r : per_branch)
      if (r) keep_least(bad1, *r);
  } else {
    for (std::uint64_t mask = 1; mask <= full; ++mask) {
      Rational nm = model.norm(b.vec_of(static_cast<std::uint32_t>(mask)));
      if (eps.greater_than(nm)) continue;
      if (violates1(static_cast<std::uint32_t>(mask), nm)) keep_least(bad1, b.set_of(static_cast<std::uint32_t>(mask)));
    }
  }
  if (bad1) {
    SuppVec uj = u.restrict(*bad1);
    return fail(VerdictKind::Condition1, *bad1,
                "|u|J| = " + model.norm(uj).str() + " exceeds (1+eps) * (u|J)(t0) with (u|J)(t0) = " +
                    pairing_f(uj, t0).str());
  }

  // Condition 2: every J in S_alpha has |u|J| < eps^2.
  const RootParam eps2 = eps.square();
  std::optional<FinSet> bad2;
  std::vector<Index> cur;
  std::uint32_t cur_mask = 0;
  auto dfs = [&](auto&& self, std::size_t from) -> void {
    for (std::size_t p = from; p < n; ++p) {
      cur.push_back(b.idx[p]);
      cur_mask |= 1u << p;
      if (member(std::span<const Index>(cur), cert.alpha)) {
        Rational nm = model.norm(b.vec_of(cur_mask));
        if (!eps2.greater_than(nm)) keep_least(bad2, FinSet::from(cur));
        self(self, p + 1);
      }
      cur.pop_back();
      cur_mask &= ~(1u << p);
    }
  };
  dfs(dfs, 0);
  if (bad2)
    return fail(VerdictKind::Condition2, *bad2,
                "J in S_" + cert.alpha.str() + " has |u|J| = " + model.norm(u.restrict(*bad2)).str() +
                    ", not below eps^2 = " + eps2.str());
  return Verdict{};
}

AlphaEpsCert restrict_cert(const AlphaEpsCert& cert, const FinSet& I0) {
  if (!I0.subset_of(cert.u.support())) throw PreconditionError("I0 must be a subset of supp u");
  Rational w = cert.model.norm(cert.u.restrict(I0));
  RootParam root = cert.eps.sqrt();
  if (root.greater_than(w))
    throw PreconditionError("|u|I0| = " + w.str() + " is below eps^(1/2) = " + root.str());
  return AlphaEpsCert{cert.model, cert.u.restrict(I0).scaled(Rational(1) / w), cert.alpha, root, cert.t0};
}

// ---------------------------------------------------------------------------
// Modulus estimate and the two claims

TauEstimate tau_estimate(const SpaceModel& model, const FinSet& pool, const Budget& budget) {
  if (pool.empty()) throw PreconditionError("tau estimate needs a nonempty window");
  TauEstimate est;
  est.lower = model.a1_constant();
  if (budget.max_evaluations == 0) {
    est.partial = true;
    return est;
  }
  constexpr std::size_t kPerStart = 16;
  const auto& P = pool.elems();
  bool have = false;
  for (std::size_t s = 0; s < P.size(); ++s) {
    const Index l1 = P[s];
    if (l1 < 2) continue;
    const std::size_t need = l1 - 1, avail = P.size() - s - 1;
    if (need > avail) break;
    std::vector<std::size_t> c(need);
    for (std::size_t i = 0; i < need; ++i) c[i] = s + 1 + i;
    for (std::size_t tried = 0; tried < kPerStart; ++tried) {
      if (est.evaluations >= budget.max_evaluations) {
        est.partial = true;
        return est;
      }
      std::vector<Index> L{l1};
      for (auto q : c) L.push_back(P[q]);
      FinSet Ls = FinSet::from(L);
      Rational ratio = model.norm(SuppVec::indicator(Ls)) / Rational(static_cast<long>(l1));
      ++est.evaluations;
      if (!have || ratio > est.lower) {
        have = true;
        est.lower = ratio;
        est.witness = Ls;
      }
      if (ratio == Rational(1)) return est;
      // next combination in lexicographic order
      std::size_t i = need;
      while (i > 0 && c[i - 1] == P.size() - need + i - 1) --i;
      if (i == 0) break;
      ++c[i - 1];
      for (std::size_t k = i; k < need; ++k) c[k] = c[k - 1] + 1;
    }
  }
  if (!have) est.partial = true;
  return est;
}

std::size_t claim1_count(const SpaceModel& model, std::size_t m, const KPoint& t, const Rational& tau,
                         const Rational& delta, Index a, Index b) {
  (void)model;
  Rational mm(static_cast<long>(m));
  if (!((mm - Rational(1)) * (tau + delta * Rational(2)) > mm * (tau + delta)))
    throw PreconditionError("claim hypothesis (m-1)(tau+2delta) > m(tau+delta) fails");
  const Rational c = tau + delta * Rational(2);
  std::size_t count = 0;
  for (const auto& [n, v] : t.functional())
    if (n >= a && n <= b && n > m && v.abs() >= c) ++count;
  return count;
}

std::size_t claim1_max_count(const SpaceModel& model, const Rational& c, const FinSet& S) {
  if (S.empty() || c > Rational(1)) return 0;
  if (c.sign() <= 0) return S.size();
  if (model.kind() == SpaceModel::Kind::Schreier)
    return static_cast<std::size_t>(max_weight(model.alpha(), SuppVec::indicator(S)).value.floor_long());
  // Tsirelson: a coordinate of a depth-d leaf has modulus theta^d. Leaves at depth <= L
  // of admissible trees with alpha = 1 form exactly S_L (iterated admissible unions).
  std::uint64_t L = 0;
  Rational p = model.theta();
  while (p >= c) {
    ++L;
    p *= model.theta();
  }
  if (model.alpha() == Ordinal::finite(1))
    return static_cast<std::size_t>(max_weight(Ordinal::finite(L), SuppVec::indicator(S)).value.floor_long());
  // General admissibility: direct recursion over admissible partitions.
  const auto& idx = S.elems();
  std::map<std::tuple<std::uint64_t, std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::uint64_t, std::size_t, std::size_t)> cnt = [&](std::uint64_t d, std::size_t i,
                                                                                 std::size_t j) -> std::size_t {
    if (i >= j) return 0;
    if (d == 0) return 1;
    auto key = std::make_tuple(d, i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t best = cnt(d - 1, i, j);
    std::vector<std::size_t> starts;
    std::vector<Index> minima;
    std::function<void(std::size_t)> dfs = [&](std::size_t from) {
      for (std::size_t s = from; s < j; ++s) {
        starts.push_back(s);
        minima.push_back(idx[s]);
        if (member(std::span<const Index>(minima), model.alpha())) {
          std::size_t tot = 0;
          for (std::size_t k = 0; k < starts.size(); ++k)
            tot += cnt(d - 1, starts[k], k + 1 < starts.size() ? starts[k + 1] : j);
          best = std::max(best, tot);
          dfs(s + 1);
        }
        starts.pop_back();
        minima.pop_back();
      }
    };
    dfs(i);
    memo[key] = best;
    return best;
  };
  return cnt(L, 0, idx.size());
}

namespace {

KPoint zero_point(const SpaceModel& model) {
  if (model.kind() == SpaceModel::Kind::Schreier) return KPoint::from_set(model, FinSet{});
  return KPoint::from_tree(model, KTree::make_node({}));
}

std::optional<KPoint> covering_point(const SpaceModel& model, const FinSet& ns) {
  if (!member(ns, model.alpha())) {
    if (ns.size() == 1 && model.kind() == SpaceModel::Kind::Tsirelson)
      return KPoint::from_tree(model, KTree::make_leaf(ns.min()));
    return std::nullopt;
  }
  if (model.kind() == SpaceModel::Kind::Schreier) return KPoint::from_set(model, ns);
  if (ns.size() == 1) return KPoint::from_tree(model, KTree::make_leaf(ns.min()));
  std::vector<KTree> leaves;
  for (Index n : ns) leaves.push_back(KTree::make_leaf(n));
  return KPoint::from_tree(model, KTree::make_node(std::move(leaves)));
}

}  // namespace

Claim2Witness claim2_witness(const SpaceModel& model, std::size_t m, const FinSet& pool, const Rational& tau,
                             const Rational& delta, const Budget& budget) {
  if (m == 0) return {zero_point(model), FinSet{}};
  const Rational need = tau - delta * Rational(2);
  std::vector<Index> above;
  for (Index n : pool)
    if (n > m) above.push_back(n);
  if (above.size() < m)
    throw SearchFailure("window holds " + std::to_string(above.size()) + " indices above " + std::to_string(m) +
                        ", need " + std::to_string(m));
  std::vector<std::size_t> starts(above.size() - m + 1);
  for (std::size_t s = 0; s < starts.size(); ++s) starts[s] = s;
  if (budget.seed != 0) {
    std::mt19937_64 rng(budget.seed);
    std::shuffle(starts.begin(), starts.end(), rng);
  }
  for (std::size_t s : starts) {
    FinSet ns = FinSet::from(std::vector<Index>(above.begin() + static_cast<long>(s),
                                                above.begin() + static_cast<long>(s + m)));
    std::vector<KPoint> cands;
    if (auto c = covering_point(model, ns)) cands.push_back(*c);
    cands.push_back(model.norming_point(SuppVec::indicator(ns)));
    std::sort(cands.begin(), cands.end(), [](const KPoint& x, const KPoint& y) { return x.encoding() < y.encoding(); });
    for (auto& t : cands) {
      bool ok = std::all_of(ns.begin(), ns.end(), [&](Index n) { return t.eval_f(n) >= need; });
      if (ok) return {std::move(t), ns};
    }
  }
  throw SearchFailure("no run of " + std::to_string(m) + " indices in the window is evaluated above tau - 2 delta = " +
                      need.str() + " by a single point");
}

// ---------------------------------------------------------------------------
// Constructive (0, eps) block

namespace {

struct ParamPair {
  Rational delta, eps0;
};

// Pairs with delta < tau/2 and (tau + 2 delta) < (1 + eps)(1 - eps0)(tau - 2 delta).
std::vector<ParamPair> feasible_pairs(const Rational& tau, const Rational& eps) {
  std::vector<ParamPair> out;
  for (unsigned k = 2; k <= 12; ++k) {
    Rational delta = tau / Rational(1L << k);
    for (long j = 63; j >= 1; --j) {
      Rational eps0 = eps * Rational(j, 64);
      Rational lhs = tau + delta * Rational(2);
      Rational rhs = (Rational(1) + eps) * (Rational(1) - eps0) * (tau - delta * Rational(2));
      if (lhs < rhs) out.push_back({delta, eps0});
    }
  }
  return out;
}

}  // namespace

Find0Result find_zero_eps_block(const SpaceModel& model, const FinSet& pool, const Rational& eps, Find0Mode mode,
                                const Budget& budget) {
  if (eps.sign() <= 0 || eps >= Rational(1)) throw PreconditionError("eps must lie in (0,1)");
  if (pool.empty()) throw PreconditionError("empty window");
  TauEstimate tau = tau_estimate(model, pool, budget);
  const Rational& t = tau.lower;
  auto pairs = feasible_pairs(t, eps);
  if (pairs.empty()) throw SearchFailure("no (delta, eps0) satisfies the parameter inequality for tau = " + t.str());
  const Rational C = model.a1_constant();
  const std::size_t cap = std::min<std::size_t>(budget.max_support, pool.size());

  auto finish = [&](Find0Result r) {
    r.cert.model = model;
    r.verdict = verify_alpha_eps(r.cert, budget);
    if (!r.verdict.pass())
      throw SearchFailure("constructed block failed verification, condition " + r.verdict.label() + " at J = " +
                          r.verdict.witness.str());
    return r;
  };

  if (mode == Find0Mode::Strict) {
    // m > (tau + 2 delta) / delta, then m0 > m / (C eps0^2).
    std::optional<std::size_t> best_m0;
    ParamPair best{};
    std::size_t best_m = 0;
    for (const auto& pp : pairs) {
      Rational q = (t + pp.delta * Rational(2)) / pp.delta;
      std::size_t m = static_cast<std::size_t>(q.floor_long()) + 1;
      Rational need = Rational(static_cast<long>(m)) / (C * pp.eps0 * pp.eps0);
      std::size_t m0 = static_cast<std::size_t>(need.floor_long()) + 1;
      if (!best_m0 || m0 < *best_m0) {
        best_m0 = m0;
        best = pp;
        best_m = m;
      }
    }
    if (*best_m0 > cap)
      throw ResourceError("required m0 = " + std::to_string(*best_m0) + " (m = " + std::to_string(best_m) +
                          ") exceeds the window/budget capacity of " + std::to_string(cap));
    Claim2Witness w = claim2_witness(model, *best_m0, pool, t, best.delta, budget);
    Rational D = model.norm(SuppVec::indicator(w.ns));
    Find0Result r{AlphaEpsCert{model, SuppVec::indicator(w.ns, Rational(1) / D), Ordinal{}, RootParam(eps), w.t1},
                  tau, best.delta, best.eps0, D, best_m, *best_m0, 0, mode, {}};
    return finish(std::move(r));
  }

  // Sharpened: stop at the first m0 whose exact D beats both the exact level count and 1/eps^2.
  const Rational eps2 = eps * eps;
  for (std::size_t m0 = 1; m0 <= cap; ++m0) {
    for (const auto& pp : pairs) {
      std::optional<Claim2Witness> w;
      try {
        w = claim2_witness(model, m0, pool, t, pp.delta, budget);
      } catch (const SearchFailure&) {
        continue;
      }
      Rational D = model.norm(SuppVec::indicator(w->ns));
      if (!(Rational(1) < eps2 * D)) break;  // D does not depend on the pair
      std::size_t count = claim1_max_count(model, t + pp.delta * Rational(2), w->ns);
      if (!(Rational(static_cast<long>(count)) < pp.eps0 * pp.eps0 * D)) continue;
      Find0Result r{AlphaEpsCert{model, SuppVec::indicator(w->ns, Rational(1) / D), Ordinal{}, RootParam(eps), w->t1},
                    tau, pp.delta, pp.eps0, D, count + 1, m0, count, mode, {}};
      return finish(std::move(r));
    }
  }
  // |sum f| <= m0, so 1 < eps^2 D needs m0 > 1/eps^2.
  std::size_t need = static_cast<std::size_t>((Rational(1) / eps2).floor_long()) + 1;
  throw ResourceError("required m0 >= " + std::to_string(need) + " indices; window/budget capacity is " +
                      std::to_string(cap));
}

// ---------------------------------------------------------------------------
// Chains

std::vector<Index> ChainCert::d() const {
  std::vector<Index> out;
  for (const auto& u : blocks) out.push_back(u.empty() ? 0 : u.max_index());
  return out;
}

std::optional<FinSet> chain_condition3(const Ordinal& alpha, Index d, const FinSet& supp, const Budget& budget) {
  if (alpha.is_zero() || d == 0) return std::nullopt;
  Ordinal target = alpha.assoc_base(d);
  Budget wide = budget;
  wide.max_window = std::max<std::size_t>(budget.max_window, budget.max_support);
  std::optional<FinSet> worst;
  for (Index j = 1; j < d; ++j) {
    Ordinal aj = alpha.assoc_base(j);
    if (aj == target) continue;
    for (const auto& F : enumerate_in(aj, supp, EnumMode::All, wide))
      if (!member(F, target)) keep_least(worst, F);
  }
  return worst;
}

Verdict verify_chain(const ChainCert& cert, const Budget& budget) {
  const auto& B = cert.blocks;
  if (B.empty()) return fail(VerdictKind::Structure, {}, "chain has no blocks");
  try {
    check_blocks(B);
  } catch (const PreconditionError& e) {
    return fail(VerdictKind::Structure, {}, e.what());
  }
  for (std::size_t i = 0; i < B.size(); ++i) {
    if (!B[i].nonnegative())
      return fail(VerdictKind::Structure, B[i].support(), "block " + std::to_string(i + 1) + " has a non-positive coefficient");
    if (cert.model.norm(B[i]) != Rational(1))
      return fail(VerdictKind::Structure, B[i].support(), "block " + std::to_string(i + 1) + " is not normalized");
  }
  const std::size_t m = B.size();
  if (m < 2 || m != B[0].min_index())
    return fail(VerdictKind::Condition1, B[0].support(),
                "chain has " + std::to_string(m) + " blocks but min supp u_1 = " + std::to_string(B[0].min_index()));
  if (!cert.eps.decreasing()) return fail(VerdictKind::Eps, {}, "eps sequence is not decreasing");
  if (!cert.eps.perfect_squares()) return fail(VerdictKind::Eps, {}, "eps sequence entries are not rational squares");
  auto rs = cert.eps.root_sum();
  if (!rs || *rs >= Rational(1))
    return fail(VerdictKind::Eps, {}, "sum of square roots is " + (rs ? rs->str() : std::string("infinite")) + ", not below 1");

  const auto d = cert.d();
  if (cert.sub_certs.size() != m - 1)
    return fail(VerdictKind::Condition2, {}, "expected " + std::to_string(m - 1) + " sub-certificates");
  for (std::size_t i = 1; i < m; ++i) {
    const auto& sc = cert.sub_certs[i - 1];
    const Index dp = d[i - 1];
    Ordinal level = cert.alpha.is_zero() ? Ordinal{} : cert.alpha.assoc_base(dp);
    std::string who = "block " + std::to_string(i + 1);
    if (!(sc.model == cert.model) || !(sc.u == B[i]))
      return fail(VerdictKind::Condition2, B[i].support(), who + ": sub-certificate does not match the block");
    if (!(sc.alpha == level))
      return fail(VerdictKind::Condition2, B[i].support(), who + ": sub-certificate level " + sc.alpha.str() +
                                                               ", expected " + level.str());
    if (!(sc.eps == RootParam(cert.eps.at(dp))))
      return fail(VerdictKind::Condition2, B[i].support(), who + ": sub-certificate eps " + sc.eps.str() +
                                                               ", expected " + cert.eps.at(dp).str());
    Verdict v = verify_alpha_eps(sc, budget);
    if (!v.pass()) return fail(VerdictKind::Condition2, v.witness, who + ": " + v.detail);
  }
  for (std::size_t i = 1; i < m; ++i)
    if (auto F = chain_condition3(cert.alpha, d[i - 1], B[i].support(), budget))
      return fail(VerdictKind::Condition3, *F,
                  "F in some S_alpha_j, j <= " + std::to_string(d[i - 1]) + ", but not in S_" +
                      cert.alpha.assoc_base(d[i - 1]).str());
  return Verdict{};
}

InequalityCheck chain_inequality_check(const ChainCert& cert, const std::vector<KPoint>& points, const Rational& tau,
                                       const Rational& delta, const FinSet& J, const Budget& budget) {
  const auto& B = cert.blocks;
  if (points.size() + 1 != B.size()) throw PreconditionError("need one point per block after the first");
  SuppVec s = sum(B);
  if (!J.subset_of(s.support())) throw PreconditionError("J must lie in the union of the supports");
  const auto d = cert.d();
  for (std::size_t i = 1; i < B.size(); ++i) {
    Ordinal level = cert.alpha.is_zero() ? Ordinal{} : cert.alpha.assoc_base(d[i - 1]);
    AlphaEpsCert sc{cert.model, B[i], level, RootParam(cert.eps.at(d[i - 1])), points[i - 1]};
    Verdict v = verify_alpha_eps(sc, budget);
    if (v.kind == VerdictKind::Condition1 || v.kind == VerdictKind::Structure)
      throw PreconditionError("point " + std::to_string(i + 1) + " does not strongly norm its block: " + v.detail);
  }
  SuppVec u = s.scaled(Rational(1) / cert.model.norm(s));
  InequalityCheck r;
  r.lhs = cert.model.norm(u.restrict(J));
  Rational acc;
  for (std::size_t i = 1; i < B.size(); ++i) acc += pairing_f(u.restrict(J.intersect(B[i].support())), points[i - 1]);
  r.rhs = delta + (tau + delta * Rational(2)) * acc;
  r.holds = r.lhs <= r.rhs;
  return r;
}

bool dominates(const ChainSearch& cs) {
  const Rational factor = cs.tau - cs.delta * Rational(2);
  for (std::size_t i = 1; i < cs.cert.blocks.size(); ++i)
    for (Index j : cs.cert.blocks[i].support())
      if (cs.t0.eval_f(j) < factor * cs.points[i - 1].eval_f(j)) return false;
  return true;
}

ChainSearch dominated_chain_search(const SpaceModel& model, const FinSet& pool, const Rational& delta, std::size_t n,
                                   const Ordinal& alpha, const EpsSeq& eps, const Budget& budget) {
  if (n < 2) throw PreconditionError("a chain needs at least two blocks (n >= 2)");
  if (delta.sign() <= 0) throw PreconditionError("delta must be positive");
  if (!pool.contains(static_cast<Index>(n)))
    throw PreconditionError("the first block f_" + std::to_string(n) + " must lie in the window");
  BlockSeq blocks{SuppVec::unit(static_cast<Index>(n))};
  std::vector<AlphaEpsCert> subs;
  for (std::size_t i = 2; i <= n; ++i) {
    const Index dp = blocks.back().max_index();
    Ordinal level = alpha.is_zero() ? Ordinal{} : alpha.assoc_base(dp);
    std::vector<Index> above;
    for (Index x : pool)
      if (x > dp) above.push_back(x);
    try {
      subs.push_back(find_block(model, level, eps.at(dp), FinSet::from(above), eps, budget));
    } catch (const std::exception& e) {
      throw SearchFailure("chain search stopped at block " + std::to_string(i) + " (largest chain found: " +
                          std::to_string(i - 1) + " block(s)): " + e.what());
    }
    blocks.push_back(subs.back().u);
  }
  ChainSearch cs{ChainCert{model, alpha, eps, blocks, subs}, subs.front().t0, {}, Rational(0), delta, {}};
  for (const auto& sc : subs) cs.points.push_back(sc.t0);
  cs.verdict = verify_chain(cs.cert, budget);
  SuppVec s = sum(blocks);
  cs.tau = tau_estimate(model, pool, budget).lower;

  std::vector<KPoint> cands;
  auto try_add = [&](auto make) {
    try {
      cands.push_back(make());
    } catch (const PreconditionError&) {
    }
  };
  if (model.kind() == SpaceModel::Kind::Schreier) {
    std::vector<Index> rest;
    for (std::size_t i = 1; i < blocks.size(); ++i)
      for (Index j : blocks[i].support())
        if (cs.points[i - 1].eval_f(j).sign() > 0) rest.push_back(j);
    std::vector<Index> with_first = rest;
    with_first.insert(with_first.begin(), static_cast<Index>(n));
    try_add([&] { return KPoint::from_set(model, FinSet::from(with_first)); });
    try_add([&] { return KPoint::from_set(model, FinSet::from(rest)); });
  } else {
    std::vector<KTree> kids;
    for (const auto& p : cs.points) kids.push_back(p.tree());
    std::vector<KTree> with_first = kids;
    with_first.insert(with_first.begin(), KTree::make_leaf(static_cast<Index>(n)));
    try_add([&] { return KPoint::from_tree(model, KTree::make_node(with_first)); });
    try_add([&] { return KPoint::from_tree(model, KTree::make_node(kids)); });
  }
  // Among dominating points prefer the largest value on sum u_i, then the least encoding.
  std::optional<KPoint> best;
  Rational best_val;
  auto consider = [&](const KPoint& t) {
    ChainSearch probe = cs;
    probe.t0 = t;
    if (!dominates(probe)) return;
    Rational val = pairing_f(s, t);
    if (!best || val > best_val || (val == best_val && t.encoding() < best->encoding())) {
      best = t;
      best_val = val;
    }
  };
  for (const auto& t : cands) consider(t);
  if (!best) {
    try {
      for (const auto& t : kpoints(model, static_cast<Index>(n), s.max_index(), 2, budget)) consider(t);
    } catch (const ResourceError&) {
    }
  }
  if (!best) throw SearchFailure("no point dominates the chain's norming points within budget");
  cs.t0 = *best;
  return cs;
}

Assembly assemble_block(const ChainSearch& chain, const Rational& eps, const Budget& budget) {
  if (eps.sign() <= 0 || eps >= Rational(1)) throw PreconditionError("eps must lie in (0,1)");
  Verdict cv = verify_chain(chain.cert, budget);
  if (!cv.pass()) throw PreconditionError("chain fails verification (condition " + cv.label() + "): " + cv.detail);
  if (!dominates(chain)) throw PreconditionError("t0 does not dominate the chain's points");
  const Rational& tau = chain.tau;
  const Rational& delta = chain.delta;
  std::optional<Rational> eps0;
  if (delta * Rational(2) < tau) {
    for (long j = 63; j >= 1 && !eps0; --j) {
      Rational e0 = eps * Rational(j, 64);
      if (!(delta < e0 * e0)) continue;
      Rational lhs = tau + delta * Rational(2);
      Rational rhs = (Rational(1) + eps) * (Rational(1) - e0) * (tau - delta * Rational(2));
      if (lhs < rhs) eps0 = e0;
    }
  }
  if (!eps0)
    throw SearchFailure("parameter failure: no eps0 with delta < eps0^2 and the ratio bound for tau = " + tau.str() +
                        ", delta = " + delta.str());
  SuppVec s = sum(chain.cert.blocks);
  AlphaEpsCert cert{chain.cert.model, s.scaled(Rational(1) / chain.cert.model.norm(s)), chain.cert.alpha,
                    RootParam(eps), chain.t0};
  Verdict v = verify_alpha_eps(cert, budget);
  return Assembly{std::move(cert), *eps0, std::move(v)};
}

AlphaEpsCert find_block(const SpaceModel& model, const Ordinal& alpha, const Rational& eps, const FinSet& pool,
                        const EpsSeq& eps_seq, const Budget& budget) {
  if (alpha.is_zero()) return find_zero_eps_block(model, pool, eps, Find0Mode::Sharpened, budget).cert;
  std::optional<Index> first;
  for (Index x : pool)
    if (x >= 2) {
      first = x;
      break;
    }
  if (!first) throw SearchFailure("window has no index >= 2 to start a chain");
  std::string last_error;
  for (Rational delta : {Rational(1, 100), Rational(1, 1000), Rational(1, 10000)}) {
    ChainSearch cs = dominated_chain_search(model, pool, delta, *first, alpha, eps_seq, budget);
    try {
      Assembly a = assemble_block(cs, eps, budget);
      if (a.verdict.pass()) return a.cert;
      last_error = "assembled block fails condition " + a.verdict.label() + " at J = " + a.verdict.witness.str();
    } catch (const SearchFailure& e) {
      last_error = e.what();
    }
  }
  throw SearchFailure("no (" + alpha.str() + ", " + eps.str() + ") block assembled: " + last_error);
}

}  // namespace awb
