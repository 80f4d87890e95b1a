#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace awb {

/*
 * Exact rational number in lowest terms.
 *
 * Thin value wrapper over mpq_class so that every constructor canonicalizes and
 * the textual form is always "p/q" (or "p" when q = 1).
 */
class Rational {
public:
  Rational() = default;
  Rational(long n) : v_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(int n) : v_(n) {}   // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  /// Parses "p", "-p" or "p/q". Throws ParseError.
  static Rational parse(std::string_view text);

  std::string str() const { return v_.get_str(); }
  double to_double() const { return v_.get_d(); }
  const mpq_class& raw() const { return v_; }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  Rational abs() const { return Rational(::abs(v_)); }

  /// Floor as a signed 64-bit integer (caller guarantees range).
  long floor_long() const;

  /// Exact square root when both numerator and denominator are perfect squares.
  bool exact_sqrt(Rational& out) const;

  Rational pow(unsigned k) const;

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

private:
  mpq_class v_;
};

inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }

/*
 * A non-negative number of the form base^(1/2^k) with rational base.
 *
 * Irrational thresholds such as eps^(1/2) are never approximated: comparisons
 * against a rational x are reduced to comparisons of x^(2^k) with base. The
 * representation is canonical: k is lowered while base is a perfect square.
 */
class RootParam {
public:
  RootParam() = default;
  explicit RootParam(Rational value) : base_(std::move(value)) { normalize(); }
  RootParam(Rational base, unsigned root_log2) : base_(std::move(base)), k_(root_log2) {
    normalize();
  }

  /// Accepts "p/q" or "(p/q)^(1/2^k)" forms, e.g. "(1/2)^(1/4)".
  static RootParam parse(std::string_view text);
  std::string str() const;

  const Rational& base() const { return base_; }
  unsigned root_log2() const { return k_; }
  bool is_rational() const { return k_ == 0; }

  /// The value itself; only valid when is_rational().
  const Rational& value() const;

  /// Principal square root, i.e. base^(1/2^(k+1)).
  RootParam sqrt() const { return RootParam(base_, k_ + 1); }
  /// The square, i.e. base^(1/2^(k-1)) (or base^2 when k = 0).
  RootParam square() const;

  // x compared with this value, exactly.
  bool less_than(const Rational& x) const;    // this < x
  bool greater_than(const Rational& x) const; // this > x
  bool at_most(const Rational& x) const { return !greater_than(x); }
  bool at_least(const Rational& x) const { return !less_than(x); }

  /// Decides lhs <= (1 + this) * y for y >= 0, exactly.
  bool one_plus_times_at_least(const Rational& lhs, const Rational& y) const;

  double approx() const;

  friend bool operator==(const RootParam& a, const RootParam& b) {
    return a.k_ == b.k_ && a.base_ == b.base_;
  }

private:
  void normalize();
  Rational base_{0};
  unsigned k_ = 0;
};

}  // namespace awb

template <>
struct std::hash<awb::Rational> {
  std::size_t operator()(const awb::Rational& r) const noexcept {
    return std::hash<std::string>{}(r.str());
  }
};
