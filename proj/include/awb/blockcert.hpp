#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "awb/budget.hpp"
#include "awb/finset.hpp"
#include "awb/normmodel.hpp"
#include "awb/ordinal.hpp"
#include "awb/rational.hpp"

namespace awb {

inline constexpr const char* kVerifierVersion = "awb-verify/1";

/*
 * Sequence of positive rationals e_1, e_2, ...: an explicit prefix followed by an
 * optional geometric tail e_n = first * ratio^(n - 1 - prefix_length).
 *
 * Text form: "default", "desk", "1/4,1/16", "geom:1/16,1/4" or "9801/40000,9801/40000;geom:1/160000,1/4".
 */
class EpsSeq {
public:
  /// e_n = 4^(-n-1): square roots sum to 1/2.
  static EpsSeq default_seq();
  /// e_1 = e_2 = (99/200)^2, then (1/400)^2 * (1/4)^(n-3): roots sum to 199/200.
  /// Small enough to keep desk-scale chains of length 2 within budget.
  static EpsSeq desk();
  static EpsSeq parse(std::string_view text);
  EpsSeq(std::vector<Rational> prefix, std::optional<std::pair<Rational, Rational>> tail);

  /// e_n, n >= 1. Throws PreconditionError past the end of a finite sequence.
  Rational at(std::size_t n) const;
  bool finite() const { return !tail_; }
  std::size_t prefix_length() const { return prefix_.size(); }

  /// Non-increasing (the tail ratio must be <= 1 and start no higher than the prefix ends).
  bool decreasing() const;
  /// Every entry (and the tail ratio) is the square of a rational.
  bool perfect_squares() const;
  /// sum_n sqrt(e_n), exact; requires perfect_squares(). Infinite sums diverge when ratio = 1.
  std::optional<Rational> root_sum() const;

  std::string str() const;
  friend bool operator==(const EpsSeq& a, const EpsSeq& b) { return a.str() == b.str(); }

private:
  std::vector<Rational> prefix_;
  std::optional<std::pair<Rational, Rational>> tail_;
};

enum class VerdictKind { Pass, Structure, Condition1, Condition2, Condition3, Eps };

struct Verdict {
  VerdictKind kind = VerdictKind::Pass;
  FinSet witness;      // violating J or F, when there is one
  std::string detail;  // human-readable reason
  bool pass() const { return kind == VerdictKind::Pass; }
  /// "pass", "structure", "1", "2", "3" or "eps".
  std::string label() const;
};

/// An (alpha, eps) block u strongly normed by t0.
struct AlphaEpsCert {
  SpaceModel model;
  SuppVec u;
  Ordinal alpha;
  RootParam eps;
  KPoint t0;
};

/// Exhaustive check of both block conditions. Condition 1 is scanned top-down with
/// monotone pruning unless prune = false.
Verdict verify_alpha_eps(const AlphaEpsCert& cert, const Budget& budget = {}, bool prune = true);

/// Restriction: (u|I0)/|u|I0| at parameter eps^(1/2), same point.
AlphaEpsCert restrict_cert(const AlphaEpsCert& cert, const FinSet& I0);

struct TauEstimate {
  Rational lower;
  FinSet witness;  // L = (l_1, ..., l_{l_1}); empty when no candidate was evaluated
  std::size_t evaluations = 0;
  bool partial = false;
};

/// Lower bound for the modulus: max of |sum_{i <= l_1} f_{l_i}| / l_1 over L inside pool.
TauEstimate tau_estimate(const SpaceModel& model, const FinSet& pool, const Budget& budget = {});

/// |{n in [a, b] : n > m, f_n(t) >= tau + 2 delta}|. Requires (m-1)(tau+2delta) > m(tau+delta).
std::size_t claim1_count(const SpaceModel& model, std::size_t m, const KPoint& t, const Rational& tau,
                         const Rational& delta, Index a, Index b);

/// max over all points t of |{n in S : f_n(t) >= c}|.
std::size_t claim1_max_count(const SpaceModel& model, const Rational& c, const FinSet& S);

struct Claim2Witness {
  KPoint t1;
  FinSet ns;
};
/// m indices of pool, all > m, and a point with f_{n_i}(t1) >= tau - 2 delta.
Claim2Witness claim2_witness(const SpaceModel& model, std::size_t m, const FinSet& pool, const Rational& tau,
                             const Rational& delta, const Budget& budget = {});

enum class Find0Mode {
  Sharpened,  // exact counts and the exact norm D in place of the worst-case bounds
  Strict      // m and m0 exactly as in the worst-case estimate
};

struct Find0Result {
  AlphaEpsCert cert;
  TauEstimate tau;
  Rational delta, eps0, D;
  std::size_t m = 0, m0 = 0, count = 0;
  Find0Mode mode = Find0Mode::Sharpened;
  Verdict verdict;
};

/// Constructive (0, eps) block supported in pool; verified before it is returned.
Find0Result find_zero_eps_block(const SpaceModel& model, const FinSet& pool, const Rational& eps,
                                Find0Mode mode = Find0Mode::Sharpened, const Budget& budget = {});

struct ChainCert {
  SpaceModel model;
  Ordinal alpha;
  EpsSeq eps;
  BlockSeq blocks;
  std::vector<AlphaEpsCert> sub_certs;  // for u_2, ..., u_m

  std::vector<Index> d() const;  // d_i = max supp u_i
};

/// Shortlex-least F in supp with F in S_{alpha_j} for some j <= d but F not in S_{alpha_d},
/// where alpha_j = assoc(alpha, j) - 1.
std::optional<FinSet> chain_condition3(const Ordinal& alpha, Index d, const FinSet& supp, const Budget& budget = {});

Verdict verify_chain(const ChainCert& cert, const Budget& budget = {});

struct InequalityCheck {
  Rational lhs, rhs;
  bool holds;
};
/// |u|J| <= delta + (tau + 2 delta) sum_{i >= 2} (u|J n supp u_i)(t_i), u the normalized sum.
InequalityCheck chain_inequality_check(const ChainCert& cert, const std::vector<KPoint>& points,
                                       const Rational& tau, const Rational& delta, const FinSet& J,
                                       const Budget& budget = {});

struct ChainSearch {
  ChainCert cert;
  KPoint t0;
  std::vector<KPoint> points;  // t_2, ..., t_n
  Rational tau;                // modulus estimate on the window
  Rational delta;
  Verdict verdict;
};

/// u_1 = f_n, later blocks found in the pool above the previous block, plus a dominating t0.
ChainSearch dominated_chain_search(const SpaceModel& model, const FinSet& pool, const Rational& delta,
                                   std::size_t n, const Ordinal& alpha, const EpsSeq& eps,
                                   const Budget& budget = {});

/// True iff f_j(t0) >= (tau - 2 delta) f_j(t_i) for every j in supp u_i, i >= 2.
bool dominates(const ChainSearch& cs);

struct Assembly {
  AlphaEpsCert cert;
  Rational eps0;
  Verdict verdict;
};
Assembly assemble_block(const ChainSearch& chain, const Rational& eps, const Budget& budget = {});

/// An (alpha, eps) block in pool: find_zero_eps_block for alpha = 0, otherwise a chain of
/// length max(2, min pool) assembled at level alpha.
AlphaEpsCert find_block(const SpaceModel& model, const Ordinal& alpha, const Rational& eps, const FinSet& pool,
                        const EpsSeq& eps_seq, const Budget& budget = {});

}  // namespace awb
