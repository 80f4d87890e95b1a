#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "awb/budget.hpp"
#include "awb/finset.hpp"
#include "awb/ordinal.hpp"
#include "awb/rational.hpp"

namespace awb {

/// Finitely supported vector with exact rational coefficients. Zeros are never stored.
class SuppVec {
public:
  SuppVec() = default;
  static SuppVec from(std::map<Index, Rational> coeffs);
  static SuppVec unit(Index n) { return indicator(FinSet{n}); }
  static SuppVec indicator(const FinSet& F, const Rational& c = 1);
  /// "3:1,4:1/2" (index:coefficient pairs). Throws ParseError.
  static SuppVec parse(std::string_view text);

  const std::map<Index, Rational>& coeffs() const { return coeffs_; }
  Rational at(Index n) const;
  void set(Index n, const Rational& c);

  bool empty() const { return coeffs_.empty(); }
  std::size_t size() const { return coeffs_.size(); }
  FinSet support() const;
  Index min_index() const;
  Index max_index() const;

  /// u|J: keeps the coordinates in J.
  SuppVec restrict(const FinSet& J) const;
  SuppVec scaled(const Rational& c) const;
  SuppVec abs() const;
  bool nonnegative() const;

  friend SuppVec operator+(const SuppVec& a, const SuppVec& b);
  friend bool operator==(const SuppVec& a, const SuppVec& b) = default;

  std::string str() const;

private:
  std::map<Index, Rational> coeffs_;
};

using BlockSeq = std::vector<SuppVec>;

/// Throws PreconditionError unless every block is nonzero and supp u_1 < supp u_2 < ...
void check_blocks(const BlockSeq& seq);
SuppVec sum(const BlockSeq& seq);

/// Construction tree of a Tsirelson norming functional.
struct KTree {
  bool leaf = true;
  Index index = 0;  // leaves only
  int sign = 1;     // leaves only, +1 or -1
  std::vector<KTree> children;

  static KTree make_leaf(Index n, int sign = 1);
  static KTree make_node(std::vector<KTree> children);
  /// Inverse of encoding(): "+5", "-5", "[+2,[+3,+4]]". Throws ParseError.
  static KTree parse(std::string_view text);
  /// Indices of all leaves, increasing.
  FinSet support() const;
  std::string encoding() const;
  int depth() const;
};

class SpaceModel;

/// A point of the compact norming set K of a model.
class KPoint {
public:
  /// Schreier space point: a set F in S_alpha. Throws PreconditionError otherwise.
  static KPoint from_set(const SpaceModel& model, FinSet F);
  /// Tsirelson point: validated construction tree.
  static KPoint from_tree(const SpaceModel& model, KTree tree);

  bool is_set() const { return std::holds_alternative<FinSet>(shape_); }
  const FinSet& set() const { return std::get<FinSet>(shape_); }
  const KTree& tree() const { return std::get<KTree>(shape_); }

  /// e_n(t), signed.
  Rational value(Index n) const;
  /// f_n(t) = |e_n(t)|.
  Rational eval_f(Index n) const { return value(n).abs(); }
  const std::map<Index, Rational>& functional() const { return values_; }
  FinSet support() const;

  std::string encoding() const;
  friend bool operator==(const KPoint& a, const KPoint& b) { return a.encoding() == b.encoding(); }

private:
  KPoint() = default;
  std::variant<FinSet, KTree> shape_;
  std::map<Index, Rational> values_;
};

struct NormCache;

/// A concrete finite-dimensional surrogate of an asymptotic-l1 space inside C(K).
class SpaceModel {
public:
  enum class Kind { Schreier, Tsirelson };

  static SpaceModel schreier(const Ordinal& alpha);
  static SpaceModel tsirelson(const Rational& theta = Rational(1, 2),
                              const Ordinal& alpha = Ordinal::finite(1));

  Kind kind() const { return kind_; }
  const Ordinal& alpha() const { return alpha_; }
  const Rational& theta() const { return theta_; }
  const Rational& a1_constant() const { return a1_constant_; }
  /// Stable description, e.g. "schreier(alpha=1)" or "tsirelson(theta=1/2,alpha=1)".
  std::string key() const;

  Rational norm(const SuppVec& x) const;
  /// A point t with sum_n x_n e_n(t) = |x| for x >= 0 (and |x| in general for Tsirelson).
  KPoint norming_point(const SuppVec& x) const;

  friend bool operator==(const SpaceModel& a, const SpaceModel& b) { return a.key() == b.key(); }

private:
  SpaceModel() = default;
  Kind kind_ = Kind::Schreier;
  Ordinal alpha_;
  Rational theta_{1};
  Rational a1_constant_{1, 2};
  std::shared_ptr<NormCache> cache_;
};

inline Rational norm(const SpaceModel& m, const SuppVec& x) { return m.norm(x); }
inline Rational eval_f(const KPoint& t, Index n) { return t.eval_f(n); }

/// sum_n x_n e_n(t).
Rational pairing(const SuppVec& x, const KPoint& t);
/// sum_n x_n f_n(t).
Rational pairing_f(const SuppVec& x, const KPoint& t);

/// Exact maximum of sum_{i in G} w_i over G in S_alpha, G within the support of w (w >= 0).
struct WeightMax {
  Rational value;
  FinSet argmax;
};
WeightMax max_weight(const Ordinal& alpha, const SuppVec& w);

/// Every point supported in [a, b]; Tsirelson trees up to the given depth. Sorted by encoding.
std::vector<KPoint> kpoints(const SpaceModel& model, Index a, Index b, int depth,
                            const Budget& budget = {});

struct A1Check {
  Rational ratio;
  bool pass;
};
A1Check check_a1(const SpaceModel& model, const BlockSeq& seq);

struct A1Search {
  std::optional<Rational> worst_ratio;  // empty when no admissible sequence exists
  BlockSeq witness;
  std::size_t vectors_evaluated = 0;
  bool partial = false;
  bool violates_declared = false;
};
/// Minimal ratio over block sequences with coefficients from grid, at least min_blocks blocks.
A1Search a1_search(const SpaceModel& model, Index a, Index b, const std::vector<Rational>& grid,
                   const Budget& budget = {}, std::size_t min_blocks = 2);

struct SignTransfer {
  BlockSeq signed_blocks;
  std::vector<KPoint> points;
};
SignTransfer sign_transfer(const SpaceModel& model, const BlockSeq& seq);

}  // namespace awb
