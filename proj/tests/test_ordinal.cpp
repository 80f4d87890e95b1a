#include <doctest.h>

#include <random>
#include <vector>

#include "awb/errors.hpp"
#include "awb/ordinal.hpp"

using awb::Ordinal;

namespace {

Ordinal O(const char* s) { return Ordinal::parse(s); }

Ordinal random_ordinal(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> terms(0, 3), coeff(1, 3), small(0, 4);
  if (depth == 0) return Ordinal::finite(static_cast<std::uint64_t>(small(rng)));
  std::vector<Ordinal::Term> ts;
  int k = terms(rng);
  std::vector<Ordinal> exps;
  for (int i = 0; i < k; ++i) exps.push_back(random_ordinal(rng, depth - 1));
  std::sort(exps.begin(), exps.end(), [](const Ordinal& a, const Ordinal& b) { return b < a; });
  exps.erase(std::unique(exps.begin(), exps.end()), exps.end());
  for (auto& e : exps) ts.push_back({e, static_cast<std::uint64_t>(coeff(rng))});
  return Ordinal::from_terms(ts);
}

}  // namespace

TEST_SUITE("ordinal") {

TEST_CASE("compare examples") {
  CHECK(O("0") < O("1"));
  CHECK(O("w") == O("w"));
  CHECK(O("w+3") < O("w*2"));
  CHECK(O("w^w") > O("w^5*7+3"));
}

TEST_CASE("classify examples") {
  CHECK(O("0").kind() == Ordinal::Kind::Zero);
  CHECK(O("5").kind() == Ordinal::Kind::Successor);
  CHECK(O("5").predecessor() == O("4"));
  CHECK(O("w^2").kind() == Ordinal::Kind::Limit);
  CHECK(O("w^2+w*3+1").predecessor() == O("w^2+w*3"));
}

TEST_CASE("assoc examples") {
  for (std::uint64_t n = 1; n < 10; ++n) CHECK(O("3").assoc(n) == O("3"));
  CHECK(O("w").assoc(4) == O("5"));
  CHECK(O("w^2").assoc(3) == O("w*3+1"));
  CHECK(O("w^w").assoc(3) == O("w^3+1"));
  CHECK(O("w*2").assoc(2) == O("w+3"));
  CHECK(O("w^(w+1)").fundamental(2) == O("w^w*2"));
  CHECK(O("w^(w*2)").fundamental(3) == O("w^(w+3)"));
  CHECK_THROWS_AS(O("0").assoc(1), awb::PreconditionError);
}

TEST_CASE("parser and printer are inverse") {
  for (const char* s : {"0", "3", "w", "w+1", "w*2", "w^2", "w^w", "w^(w+1)*3+w*2+5", "w^(w^w)",
                        "w^(w*2+1)+w^w*4"})
    CHECK(O(s).str() == s);
  for (const char* bad : {"", "w+w", "1+w", "w^1", "w*1", "w^0", "w^(3)", "w^(w)", "2+3", "01", "w^", "w+0",
                          "(w)", "w^(w+1"})
    CHECK_THROWS_AS(O(bad), awb::ParseError);
  CHECK(O(" w ^ 2 + 1 ") == O("w^2+1"));
}

TEST_CASE("depth limit") {
  CHECK(O("w^(w^(w^w))").depth() == 4);
  CHECK_THROWS_AS(Ordinal::parse("w^(w^(w^w))", 3), awb::ParseError);
  CHECK_NOTHROW(Ordinal::parse("w^(w^(w^w))", 4));
}

TEST_CASE("compare is a total order on random samples") {
  std::mt19937 rng(7);
  std::vector<Ordinal> xs;
  for (int i = 0; i < 1000; ++i) xs.push_back(random_ordinal(rng, 3));
  for (int i = 0; i < 200; ++i) {
    const auto& a = xs[i];
    CHECK(Ordinal::parse(a.str()) == a);
    for (int j = 0; j < 200; ++j) {
      const auto& b = xs[j];
      bool lt = a < b, gt = b < a, eq = a == b;
      CHECK(int(lt) + int(gt) + int(eq) == 1);
      if (eq) CHECK(a.str() == b.str());
      for (int k = 0; k < 20; ++k)
        if (a < b && b < xs[k]) CHECK(a < xs[k]);
    }
  }
}

TEST_CASE("associated sequences are increasing successors below the limit") {
  std::mt19937 rng(11);
  int limits = 0;
  for (int i = 0; i < 400; ++i) {
    Ordinal a = random_ordinal(rng, 3);
    if (a.kind() == Ordinal::Kind::Successor) CHECK(a.predecessor().successor() == a);
    if (a.kind() != Ordinal::Kind::Limit) continue;
    ++limits;
    for (std::uint64_t n = 1; n < 8; ++n) {
      Ordinal s = a.assoc(n);
      CHECK(s.kind() == Ordinal::Kind::Successor);
      CHECK(s < a);
      CHECK(s < a.assoc(n + 1));
    }
  }
  CHECK(limits > 50);
}

}
