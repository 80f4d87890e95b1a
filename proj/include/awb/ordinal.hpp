#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace awb {

/*
 * Countable ordinal below epsilon_0 in Cantor normal form,
 *
 *     w^e_1 * c_1 + w^e_2 * c_2 + ... + w^e_k * c_k,   e_1 > e_2 > ... > e_k,  c_i >= 1.
 *
 * The empty term list is 0. Values are immutable; every constructor yields the
 * unique normal form. Text syntax: 0, 3, w, w+1, w*2, w^2, w^w, w^(w+1)*3+w*2+5.
 */
class Ordinal {
public:
  struct Term;

  enum class Kind { Zero, Successor, Limit };

  static constexpr int kDefaultMaxDepth = 8;

  Ordinal() = default;

  static Ordinal finite(std::uint64_t n);
  static Ordinal omega();
  /// w^exponent * coeff (coeff >= 1).
  static Ordinal omega_power(const Ordinal& exponent, std::uint64_t coeff = 1);

  /// Builds from terms; throws PreconditionError unless they are in normal form.
  static Ordinal from_terms(std::vector<Term> terms);

  /// Parses canonical text. Rejects non-normal forms (w^1, w*1, w+w, 1+w, ...).
  static Ordinal parse(std::string_view text, int max_depth = kDefaultMaxDepth);

  std::string str() const;

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const;
  /// Value of a finite ordinal; throws PreconditionError otherwise.
  std::uint64_t finite_value() const;
  /// Nesting depth of exponents: finite ordinals have depth 0, w has depth 1.
  int depth() const;

  Kind kind() const;
  /// Predecessor of a successor ordinal.
  Ordinal predecessor() const;
  Ordinal successor() const { return plus(1); }
  Ordinal plus(std::uint64_t n) const;

  /// Canonical fundamental sequence lambda[n], n >= 1, of a limit ordinal:
  ///   (b + w^(d+1))[n] = b + w^d * n,   (b + w^l)[n] = b + w^(l[n]) for limit l.
  Ordinal fundamental(std::uint64_t n) const;

  /// The term alpha_n + 1 of the associated successor sequence (alpha >= 1, n >= 1).
  Ordinal assoc(std::uint64_t n) const;
  /// alpha_n itself, i.e. assoc(n) - 1.
  Ordinal assoc_base(std::uint64_t n) const { return assoc(n).predecessor(); }

  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);
  friend bool operator==(const Ordinal& a, const Ordinal& b);

private:
  std::vector<Term> terms_;
};

struct Ordinal::Term {
  Ordinal exponent;
  std::uint64_t coeff = 1;
};

std::strong_ordering operator<=>(const Ordinal::Term& a, const Ordinal::Term& b);

}  // namespace awb

template <>
struct std::hash<awb::Ordinal> {
  std::size_t operator()(const awb::Ordinal& a) const noexcept {
    return std::hash<std::string>{}(a.str());
  }
};
