#include "awb/finset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <iterator>

#include "awb/errors.hpp"

namespace awb {

FinSet::FinSet(std::initializer_list<Index> elems) : FinSet(from(std::vector<Index>(elems))) {}

FinSet FinSet::from(std::vector<Index> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  if (!elems.empty() && elems.front() == 0)
    throw PreconditionError("finite sets contain positive integers only");
  FinSet s;
  s.elems_ = std::move(elems);
  return s;
}

FinSet FinSet::range(Index a, Index b) {
  if (a == 0) throw PreconditionError("windows start at 1 or later");
  FinSet s;
  for (Index n = a; n <= b && n >= a; ++n) s.elems_.push_back(n);
  return s;
}

FinSet FinSet::parse(std::string_view text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (!t.empty() && t.front() == '{') {
    if (t.back() != '}') throw ParseError("set '" + std::string(text) + "': missing '}'");
    t = t.substr(1, t.size() - 2);
  }
  std::vector<Index> out;
  if (t.empty()) return FinSet{};
  std::size_t pos = 0;
  while (pos <= t.size()) {
    std::size_t comma = t.find(',', pos);
    if (comma == std::string::npos) comma = t.size();
    std::string_view tok(t.data() + pos, comma - pos);
    Index v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || p != tok.data() + tok.size() || v == 0)
      throw ParseError("set '" + std::string(text) + "': bad element '" + std::string(tok) + "'");
    out.push_back(v);
    pos = comma + 1;
  }
  std::vector<Index> sorted = out;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ParseError("set '" + std::string(text) + "': repeated element");
  return from(std::move(out));
}

Index FinSet::min() const {
  if (elems_.empty()) throw PreconditionError("min of the empty set");
  return elems_.front();
}

Index FinSet::max() const {
  if (elems_.empty()) throw PreconditionError("max of the empty set");
  return elems_.back();
}

bool FinSet::contains(Index n) const { return std::binary_search(elems_.begin(), elems_.end(), n); }

bool FinSet::subset_of(const FinSet& other) const {
  return std::includes(other.elems_.begin(), other.elems_.end(), elems_.begin(), elems_.end());
}

bool FinSet::precedes(const FinSet& other) const {
  return elems_.empty() || other.elems_.empty() || elems_.back() < other.elems_.front();
}

FinSet FinSet::intersect(const FinSet& other) const {
  FinSet r;
  std::set_intersection(elems_.begin(), elems_.end(), other.elems_.begin(), other.elems_.end(),
                        std::back_inserter(r.elems_));
  return r;
}

FinSet FinSet::unite(const FinSet& other) const {
  FinSet r;
  std::set_union(elems_.begin(), elems_.end(), other.elems_.begin(), other.elems_.end(),
                 std::back_inserter(r.elems_));
  return r;
}

FinSet FinSet::minus(const FinSet& other) const {
  FinSet r;
  std::set_difference(elems_.begin(), elems_.end(), other.elems_.begin(), other.elems_.end(),
                      std::back_inserter(r.elems_));
  return r;
}

FinSet FinSet::with(Index n) const { return unite(FinSet{n}); }

std::string FinSet::str() const {
  std::string s = "{";
  for (std::size_t i = 0; i < elems_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(elems_[i]);
  }
  return s + "}";
}

bool shortlex_less(const FinSet& a, const FinSet& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace awb
