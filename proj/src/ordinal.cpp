#include "awb/ordinal.hpp"

#include <cctype>

#include "awb/errors.hpp"

namespace awb {

Ordinal Ordinal::finite(std::uint64_t n) {
  Ordinal o;
  if (n > 0) o.terms_.push_back(Term{Ordinal{}, n});
  return o;
}

Ordinal Ordinal::from_terms(std::vector<Term> terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].coeff == 0) throw PreconditionError("Cantor normal form coefficient must be positive");
    if (i > 0 && !(terms[i].exponent < terms[i - 1].exponent))
      throw PreconditionError("Cantor normal form exponents must strictly decrease");
  }
  Ordinal o;
  o.terms_ = std::move(terms);
  return o;
}

Ordinal Ordinal::omega() { return omega_power(finite(1)); }

Ordinal Ordinal::omega_power(const Ordinal& exponent, std::uint64_t coeff) {
  if (coeff == 0) throw PreconditionError("omega_power coefficient must be positive");
  Ordinal o;
  o.terms_.push_back(Term{exponent, coeff});
  return o;
}

bool Ordinal::is_finite() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

std::uint64_t Ordinal::finite_value() const {
  if (!is_finite()) throw PreconditionError("ordinal " + str() + " is not finite");
  return terms_.empty() ? 0 : terms_[0].coeff;
}

int Ordinal::depth() const {
  int d = 0;
  for (const auto& t : terms_)
    if (!t.exponent.is_zero()) d = std::max(d, 1 + t.exponent.depth());
  return d;
}

Ordinal::Kind Ordinal::kind() const {
  if (terms_.empty()) return Kind::Zero;
  return terms_.back().exponent.is_zero() ? Kind::Successor : Kind::Limit;
}

Ordinal Ordinal::predecessor() const {
  if (kind() != Kind::Successor) throw PreconditionError(str() + " is not a successor ordinal");
  Ordinal p = *this;
  if (--p.terms_.back().coeff == 0) p.terms_.pop_back();
  return p;
}

Ordinal Ordinal::plus(std::uint64_t n) const {
  if (n == 0) return *this;
  Ordinal r = *this;
  if (!r.terms_.empty() && r.terms_.back().exponent.is_zero())
    r.terms_.back().coeff += n;
  else
    r.terms_.push_back(Term{Ordinal{}, n});
  return r;
}

Ordinal Ordinal::fundamental(std::uint64_t n) const {
  if (kind() != Kind::Limit) throw PreconditionError(str() + " is not a limit ordinal");
  if (n == 0) throw PreconditionError("fundamental sequence index must be >= 1");
  Ordinal r = *this;
  Term last = r.terms_.back();
  if (last.coeff > 1)
    --r.terms_.back().coeff;
  else
    r.terms_.pop_back();
  const Ordinal& e = last.exponent;
  if (e.kind() == Kind::Successor)
    r.terms_.push_back(Term{e.predecessor(), n});
  else
    r.terms_.push_back(Term{e.fundamental(n), 1});
  return r;
}

Ordinal Ordinal::assoc(std::uint64_t n) const {
  if (n == 0) throw PreconditionError("associated sequence index must be >= 1");
  switch (kind()) {
    case Kind::Zero:
      throw PreconditionError("the ordinal 0 has no associated sequence");
    case Kind::Successor:
      return *this;
    case Kind::Limit:
      break;
  }
  return fundamental(n).successor();
}

std::strong_ordering operator<=>(const Ordinal::Term& a, const Ordinal::Term& b) {
  if (auto c = a.exponent <=> b.exponent; c != 0) return c;
  return a.coeff <=> b.coeff;
}

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i)
    if (auto c = a.terms_[i] <=> b.terms_[i]; c != 0) return c;
  return a.terms_.size() <=> b.terms_.size();
}

bool operator==(const Ordinal& a, const Ordinal& b) { return (a <=> b) == 0; }

// ---------------------------------------------------------------------------
// Text form

std::string Ordinal::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& t : terms_) {
    if (!out.empty()) out += '+';
    if (t.exponent.is_zero()) {
      out += std::to_string(t.coeff);
      continue;
    }
    out += 'w';
    if (t.exponent != finite(1)) {
      out += '^';
      if (t.exponent.is_finite() || t.exponent == omega())
        out += t.exponent.str();
      else
        out += "(" + t.exponent.str() + ")";
    }
    if (t.coeff > 1) out += "*" + std::to_string(t.coeff);
  }
  return out;
}

namespace {

class OrdinalParser {
public:
  OrdinalParser(std::string_view text, int max_depth) : text_(text), max_depth_(max_depth) {}

  Ordinal parse_all() {
    if (text_.empty()) fail("empty ordinal");
    Ordinal o = parse_sum(0);
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return o;
  }

private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("ordinal '" + std::string(text_) + "': " + why);
  }

  bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

  std::uint64_t parse_nat() {
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail("expected a natural number");
    if (text_[pos_] == '0' && pos_ + 1 < text_.size() &&
        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))
      fail("leading zero");
    std::uint64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      if (v > (UINT64_MAX - 9) / 10) fail("natural number overflow");
      v = v * 10 + static_cast<std::uint64_t>(text_[pos_++] - '0');
    }
    return v;
  }

  Ordinal parse_sum(int depth) {
    if (depth > max_depth_) fail("exponent nesting exceeds depth limit");
    if (peek('0') && (pos_ + 1 == text_.size() || text_[pos_ + 1] == ')')) {
      ++pos_;
      return Ordinal{};
    }
    std::vector<Ordinal::Term> terms;
    terms.push_back(parse_term(depth));
    while (peek('+')) {
      ++pos_;
      terms.push_back(parse_term(depth));
    }
    for (std::size_t i = 1; i < terms.size(); ++i)
      if (!(terms[i].exponent < terms[i - 1].exponent))
        fail("terms are not in Cantor normal form (exponents must strictly decrease)");
    return Ordinal::from_terms(std::move(terms));
  }

  Ordinal::Term parse_term(int depth) {
    if (peek('w')) {
      ++pos_;
      Ordinal exponent = Ordinal::finite(1);
      if (peek('^')) {
        ++pos_;
        if (peek('(')) {
          ++pos_;
          exponent = parse_sum(depth + 1);
          if (!peek(')')) fail("missing ')'");
          ++pos_;
          if (exponent.is_finite() || exponent == Ordinal::omega())
            fail("redundant parentheses around exponent " + exponent.str());
        } else if (peek('w')) {
          ++pos_;
          exponent = Ordinal::omega();
        } else {
          std::uint64_t k = parse_nat();
          if (k < 2) fail("exponent must be >= 2 (write w or 1 instead)");
          exponent = Ordinal::finite(k);
        }
      }
      if (exponent.depth() + 1 > max_depth_) fail("exponent nesting exceeds depth limit");
      std::uint64_t coeff = 1;
      if (peek('*')) {
        ++pos_;
        coeff = parse_nat();
        if (coeff < 2) fail("coefficient must be >= 2 when written");
      }
      return Ordinal::Term{exponent, coeff};
    }
    std::uint64_t n = parse_nat();
    if (n == 0) fail("zero term inside a sum");
    return Ordinal::Term{Ordinal{}, n};
  }

  std::string_view text_;
  int max_depth_;
  std::size_t pos_ = 0;
};

}  // namespace

Ordinal Ordinal::parse(std::string_view text, int max_depth) {
  std::string compact;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
  return OrdinalParser(compact, max_depth).parse_all();
}

}  // namespace awb
