#include "awb/rational.hpp"

#include <cmath>

#include "awb/errors.hpp"

namespace awb {

Rational::Rational(long num, long den) {
  if (den == 0) throw PreconditionError("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw ParseError("empty rational");
  auto digits_ok = [](std::string_view t) {
    if (!t.empty() && (t[0] == '-' || t[0] == '+')) t.remove_prefix(1);
    if (t.empty()) return false;
    for (char c : t)
      if (c < '0' || c > '9') return false;
    return true;
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!digits_ok(num) || !digits_ok(den) || den[0] == '-' || den[0] == '+')
    throw ParseError("malformed rational '" + s + "'");
  if (num[0] == '+') num.erase(0, 1);
  mpz_class n(num, 10), d(den, 10);
  if (d == 0) throw ParseError("zero denominator in '" + s + "'");
  mpq_class q(n, d);
  q.canonicalize();
  return Rational(q);
}

long Rational::floor_long() const {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return f.get_si();
}

bool Rational::exact_sqrt(Rational& out) const {
  if (sign() < 0) return false;
  if (!mpz_perfect_square_p(v_.get_num_mpz_t()) || !mpz_perfect_square_p(v_.get_den_mpz_t()))
    return false;
  mpz_class n, d;
  mpz_sqrt(n.get_mpz_t(), v_.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), v_.get_den_mpz_t());
  out = Rational(mpq_class(n, d));
  return true;
}

Rational Rational::pow(unsigned k) const {
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), v_.get_num_mpz_t(), k);
  mpz_pow_ui(d.get_mpz_t(), v_.get_den_mpz_t(), k);
  return Rational(mpq_class(n, d));
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw PreconditionError("division by zero");
  v_ /= o.v_;
  return *this;
}

// ---------------------------------------------------------------------------

void RootParam::normalize() {
  if (base_.sign() < 0) throw PreconditionError("RootParam base must be non-negative");
  Rational r;
  while (k_ > 0 && base_.exact_sqrt(r)) {
    base_ = r;
    --k_;
  }
}

RootParam RootParam::parse(std::string_view text) {
  std::string s(text);
  if (!s.empty() && s.front() == '(') {
    auto close = s.find(')');
    const std::string tail = close == std::string::npos ? "" : s.substr(close + 1);
    const std::string prefix = "^(1/";
    if (close == std::string::npos || tail.rfind(prefix, 0) != 0 || tail.back() != ')')
      throw ParseError("malformed root parameter '" + s + "'");
    Rational base = Rational::parse(s.substr(1, close - 1));
    const std::string dstr = tail.substr(prefix.size(), tail.size() - prefix.size() - 1);
    Rational den = Rational::parse(dstr);
    if (!den.is_integer() || den.sign() <= 0) throw ParseError("bad root in '" + s + "'");
    long d = den.floor_long();
    unsigned k = 0;
    while (d > 1 && d % 2 == 0) {
      d /= 2;
      ++k;
    }
    if (d != 1) throw ParseError("root must be a power of two in '" + s + "'");
    return RootParam(base, k);
  }
  return RootParam(Rational::parse(s));
}

std::string RootParam::str() const {
  if (k_ == 0) return base_.str();
  return "(" + base_.str() + ")^(1/" + std::to_string(1UL << k_) + ")";
}

const Rational& RootParam::value() const {
  if (k_ != 0) throw PreconditionError("RootParam " + str() + " is irrational");
  return base_;
}

RootParam RootParam::square() const {
  if (k_ == 0) return RootParam(base_ * base_);
  return RootParam(base_, k_ - 1);
}

bool RootParam::less_than(const Rational& x) const {
  if (x.sign() <= 0) return false;
  return base_ < x.pow(1U << k_);
}

bool RootParam::greater_than(const Rational& x) const {
  if (x.sign() < 0) return true;
  return base_ > x.pow(1U << k_);
}

bool RootParam::one_plus_times_at_least(const Rational& lhs, const Rational& y) const {
  if (y.sign() < 0) throw PreconditionError("one_plus_times_at_least needs y >= 0");
  Rational excess = lhs - y;
  if (excess.sign() <= 0) return true;
  if (y.is_zero()) return false;
  return !less_than(excess / y);
}

double RootParam::approx() const {
  return std::pow(base_.to_double(), 1.0 / static_cast<double>(1UL << k_));
}

}  // namespace awb
