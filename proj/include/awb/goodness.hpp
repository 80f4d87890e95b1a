#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "awb/blockcert.hpp"
#include "awb/budget.hpp"
#include "awb/finset.hpp"
#include "awb/normmodel.hpp"
#include "awb/ordinal.hpp"
#include "awb/rational.hpp"

namespace awb {

/// Finitely supported positive measure on K, total mass <= 1.
class Measure {
public:
  struct Atom {
    KPoint point;
    Rational mass;
  };

  /// Merges repeated points, drops zero masses and sorts atoms by point encoding.
  static Measure make(const SpaceModel& model, std::vector<Atom> atoms);
  static Measure point_mass(const SpaceModel& model, const KPoint& t, const Rational& mass = 1);
  static Measure zero(const SpaceModel& model) { return make(model, {}); }

  const SpaceModel& model() const { return model_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  Rational total() const;

  /// integral of f_n = |e_n|.
  Rational integral_f(Index n) const;
  /// integral of sum_n x_n e_n (signed).
  Rational integral(const SuppVec& x) const;
  /// mu([f_n >= c]).
  Rational level_mass(Index n, const Rational& c) const;

  friend bool operator==(const Measure& a, const Measure& b);

private:
  explicit Measure(SpaceModel m) : model_(std::move(m)) {}
  SpaceModel model_;
  std::vector<Atom> atoms_;
};

struct MeasureFamily {
  SpaceModel model;
  std::vector<Measure> members;

  /// Requires a nonempty list of measures on one model.
  static MeasureFamily make(std::vector<Measure> members);
  /// Point masses at the maximal S_alpha sets of [a, b] (Schreier models only).
  static MeasureFamily maximal_point_masses(const SpaceModel& model, Index a, Index b, const Budget& budget = {});
};

struct EvenPart {
  FinSet a2;                   // m_2, m_4, ...
  std::map<Index, Index> pred; // m_{2i} -> m_{2i-1}
};
/// Requires |A| even.
EvenPart even_part(const FinSet& A);
/// F^- for F inside A^(2).
FinSet minus_part(const FinSet& F, const EvenPart& ep);

/// Increasing infinite sequence: explicit terms, then step-1 continuation from the last.
class IntSeq {
public:
  explicit IntSeq(std::vector<Index> head);
  static IntSeq from(Index start) { return IntSeq({start}); }
  /// "10,13,14..." style text; a trailing "..." is implied.
  static IntSeq parse(std::string_view text);

  /// l_j, j >= 1.
  Index at(std::size_t j) const;
  /// l_j, l_{j+1}, ...
  IntSeq drop(std::size_t count) const;
  std::vector<Index> take(std::size_t count) const;
  std::string str() const;

private:
  std::vector<Index> head_;
};

struct Splice {
  FinSet core;  // F and F^-
  IntSeq tail;  // l_3, l_4, ...
  /// First `count` elements of the union in increasing order.
  std::vector<Index> take(std::size_t count) const;
  std::string str() const;
};
/// (F, A) spliced with L. Requires |A| even, F inside A^(2), max A < l_1.
Splice splice(const FinSet& F, const FinSet& A, const IntSeq& L);

/// F2 of even cardinality and F1 inside F2^(2).
bool is_appropriate(const FinSet& F1, const FinSet& F2);

/// mu([|f_{l_2i}| >= eps_{l_{2i-1}}]) >= rho for i <= n; L lists at least 2n indices.
bool is_good(const Measure& mu, const std::vector<Index>& L, std::size_t n, const Rational& rho, const EpsSeq& eps);

/// Finite-window admissibility of (F1, F2) for L, measures in the family and n <= n_max.
bool admissible_window(const MeasureFamily& fam, const FinSet& F1, const FinSet& F2, const IntSeq& L,
                       std::size_t n_max, const Rational& rho, const EpsSeq& eps, const EpsSeq& deltas);

struct NormingCheck {
  bool pass = false;
  Rational worst;   // min over grid vectors of max_mu |int f dmu| / |f|
  SuppVec witness;  // a vector attaining worst
  std::size_t vectors = 0;
  bool partial = false;  // evaluation budget ran out
};
/// Every vector with coefficients from grid (or 0) on [a, b] against the family. Only the grid
/// is checked; this says nothing about vectors off the grid.
NormingCheck rho_norms_check(const MeasureFamily& fam, Index a, Index b, const std::vector<Rational>& grid,
                             const Rational& rho, const Budget& budget = {});

/// mu([f_n >= D delta]); nullopt when delta = 0 (the index is left out). Throws for D <= 0.
std::optional<Rational> chebyshev_mass(const Measure& mu, Index n, const Rational& D, const Rational& delta);

/// The first eps = p/q (q = 1..64, then p ascending, lowest terms) in (0, rho/2) with
/// ((rho - 2 eps)/(2 + eps))^2 > eps^2 + rho^2/5.
std::optional<Rational> choose_eps(const Rational& rho);

struct MPRow {
  std::size_t i = 0;    // position in N^(2)
  Index n = 0;          // n_{2i}
  Index pred = 0;       // n_{2i-1}
  Rational a;           // block coefficient
  Rational eps_pred;    // eps_{n_{2i-1}}
  Rational delta;       // int f_{n_{2i}} dmu
  std::optional<Rational> phi_mass;  // int phi_i dmu, indices with delta > 0
  Rational level_mass;  // mu([f_{n_{2i}} >= eps_{n_{2i-1}}])
  bool in_I0 = false, in_I = false;
};

struct MPStep {
  std::string name;
  std::vector<Rational> values;  // the chain of quantities, each <= the next unless noted
  bool holds = false;
  std::string note;
};

struct MPTranscript {
  MPTranscript(AlphaEpsCert b, Measure m) : block(std::move(b)), mu(std::move(m)) {}
  Rational rho, eps, D;
  Ordinal alpha;
  FinSet window;
  std::string eps_seq;
  AlphaEpsCert block;
  bool block_verified = false;
  std::size_t mu_index = 0;
  Measure mu;
  std::vector<MPRow> rows;
  FinSet I, G;  // G = {n_{2i} : i in I}
  bool G_member = true;
  std::vector<MPStep> steps;
  std::string failed_step;  // empty when every step holds
  bool ok() const { return failed_step.empty(); }
};

/// Recomputes every transcript quantity from its inputs. Pure.
MPTranscript compute_mp_transcript(const MeasureFamily& fam, std::size_t mu_index, const AlphaEpsCert& block,
                                   bool block_verified, const Ordinal& alpha, const Rational& rho,
                                   const Rational& eps, const EpsSeq& eps_seq, const FinSet& N);

struct MPOptions {
  std::optional<AlphaEpsCert> block;  // use this certificate instead of searching
  bool diagnostic = false;            // continue with an unverified uniform block if none is found
  Budget budget;
};

/// Runs the whole computation. Throws PreconditionError for bad inputs and SearchFailure when no
/// block is found (outside diagnostic mode); mathematical failures are reported in the transcript.
MPTranscript prop_mp_run(const MeasureFamily& fam, const Ordinal& alpha, const Rational& rho, const EpsSeq& eps_seq,
                         const FinSet& N, const MPOptions& opts = {});

}  // namespace awb
