#include <doctest.h>

#include <random>

#include "awb/errors.hpp"
#include "awb/normmodel.hpp"
#include "awb/schreier.hpp"
#include "oracles.hpp"

using namespace awb;

namespace {

Ordinal O(const char* s) { return Ordinal::parse(s); }
SuppVec V(const char* s) { return SuppVec::parse(s); }

SuppVec random_vec(std::mt19937& rng, Index lo, Index hi, bool nonneg) {
  std::uniform_int_distribution<int> coin(0, 2), num(-4, 4), den(1, 3);
  SuppVec v;
  for (Index n = lo; n <= hi; ++n)
    if (coin(rng)) v.set(n, Rational(nonneg ? std::abs(num(rng)) : num(rng), den(rng)));
  return v;
}

}  // namespace

TEST_SUITE("normmodel") {

TEST_CASE("norm examples") {
  auto T = SpaceModel::tsirelson();
  auto S = SpaceModel::schreier(O("1"));
  CHECK(T.norm(SuppVec::unit(5)) == Rational(1));
  CHECK(T.norm(V("3:1,4:1,5:1")) == Rational(3, 2));
  CHECK(T.norm(V("1:1,2:1")) == Rational(1));
  CHECK(S.norm(V("1:1,2:1,3:1")) == Rational(2));
  CHECK(T.norm(SuppVec{}) == Rational(0));
  CHECK(S.norm(SuppVec{}) == Rational(0));
  CHECK_THROWS_AS(SpaceModel::tsirelson(Rational(1)), PreconditionError);
  CHECK_THROWS_AS(SpaceModel::schreier(O("0")), PreconditionError);
}

TEST_CASE("eval_f examples") {
  auto S = SpaceModel::schreier(O("1"));
  auto T = SpaceModel::tsirelson();
  auto F = KPoint::from_set(S, FinSet{2, 3});
  CHECK(F.eval_f(2) == Rational(1));
  CHECK(F.eval_f(5) == Rational(0));
  auto t = KPoint::from_tree(T, KTree::make_node({KTree::make_leaf(2), KTree::make_leaf(3)}));
  CHECK(t.eval_f(2) == Rational(1, 2));
  CHECK_THROWS_AS(KPoint::from_set(S, FinSet{1, 2}), PreconditionError);
  // {1,2} minima are not admissible; overlapping children are not successive
  CHECK_THROWS_AS(KPoint::from_tree(T, KTree::make_node({KTree::make_leaf(1), KTree::make_leaf(2)})),
                  PreconditionError);
  CHECK_THROWS_AS(KPoint::from_tree(T, KTree::make_node({KTree::make_leaf(4), KTree::make_leaf(3)})),
                  PreconditionError);
}

TEST_CASE("kpoints examples") {
  auto S = SpaceModel::schreier(O("1"));
  auto T = SpaceModel::tsirelson();
  auto k1 = kpoints(S, 2, 3, 0);
  REQUIRE(k1.size() == 4);
  std::vector<std::string> enc;
  for (auto& p : k1) enc.push_back(p.encoding());
  CHECK(enc == std::vector<std::string>{"{2,3}", "{2}", "{3}", "{}"});
  auto k2 = kpoints(T, 5, 5, 0);
  REQUIRE(k2.size() == 2);
  CHECK(k2[0].encoding() == "+5");
  CHECK(k2[1].encoding() == "-5");
  CHECK(kpoints(S, 1, 2, 0).size() == 3);
}

TEST_CASE("check_a1 examples") {
  auto S = SpaceModel::schreier(O("1"));
  auto T = SpaceModel::tsirelson();
  auto r1 = check_a1(T, {SuppVec::unit(2), SuppVec::unit(3)});
  CHECK(r1.ratio == Rational(1, 2));
  CHECK(r1.pass);
  auto r2 = check_a1(S, {SuppVec::unit(2), SuppVec::unit(3)});
  CHECK(r2.ratio == Rational(1));
  CHECK(check_a1(T, {V("4:1,9:2")}).ratio == Rational(1));
  CHECK_THROWS_AS(check_a1(T, {SuppVec::unit(1), SuppVec::unit(3)}), PreconditionError);
  CHECK_THROWS_AS(check_a1(T, {SuppVec::unit(3), SuppVec::unit(3)}), PreconditionError);
}

TEST_CASE("a1_search examples") {
  auto T = SpaceModel::tsirelson();
  auto S = SpaceModel::schreier(O("1"));
  auto r = a1_search(T, 2, 6, {Rational(1)});
  REQUIRE(r.worst_ratio);
  CHECK(*r.worst_ratio == Rational(1, 2));
  CHECK_FALSE(r.partial);
  CHECK(check_a1(T, r.witness).ratio == *r.worst_ratio);
  auto s = a1_search(S, 2, 4, {Rational(1)});
  REQUIRE(s.worst_ratio);
  CHECK(*s.worst_ratio >= Rational(1, 2));
  auto none = a1_search(T, 1, 1, {Rational(1)});
  CHECK_FALSE(none.worst_ratio);
  CHECK(none.witness.empty());
  Budget tiny;
  tiny.max_evaluations = 3;
  CHECK(a1_search(T, 2, 6, {Rational(1)}, tiny).partial);
}

TEST_CASE("sign_transfer examples") {
  auto S = SpaceModel::schreier(O("1"));
  auto T = SpaceModel::tsirelson();
  auto st = sign_transfer(S, {V("2:1,3:1"), V("5:1/2")});
  CHECK(st.signed_blocks == BlockSeq{V("2:1,3:1"), V("5:1/2")});
  auto tt = sign_transfer(T, {V("2:1,3:1")});
  REQUIRE(tt.points.size() == 1);
  CHECK(pairing(tt.signed_blocks[0], tt.points[0]) == T.norm(V("2:1,3:1")));
  CHECK(sign_transfer(T, {}).signed_blocks.empty());
  CHECK_THROWS_AS(sign_transfer(T, {V("2:-1")}), PreconditionError);
}

TEST_CASE("Tsirelson closed form on consecutive runs") {
  auto T = SpaceModel::tsirelson();
  for (Index n = 2; n <= 8; ++n)
    CHECK(T.norm(SuppVec::indicator(FinSet::range(n, 2 * n - 1))) == Rational(n, 2));
}

TEST_CASE("memoized Tsirelson norm equals the exhaustive recursion") {
  auto T = SpaceModel::tsirelson();
  for (const auto& F : oracle::power_set(1, 8)) {
    SuppVec x = SuppVec::indicator(F);
    CHECK(T.norm(x) == oracle::tsirelson_norm(x, Rational(1, 2), O("1")));
  }
  auto T2 = SpaceModel::tsirelson(Rational(1, 3), O("2"));
  for (const auto& F : oracle::power_set(2, 8)) {
    SuppVec x = SuppVec::indicator(F);
    CHECK(T2.norm(x) == oracle::tsirelson_norm(x, Rational(1, 3), O("2")));
  }
}

TEST_CASE("Schreier-space norm equals the subset oracle") {
  std::mt19937 rng(3);
  for (const char* a : {"1", "2", "w"}) {
    auto S = SpaceModel::schreier(O(a));
    for (int i = 0; i < 300; ++i) {
      SuppVec x = random_vec(rng, 1, 11, false);
      CHECK(S.norm(x) == oracle::schreier_norm(x, O(a)));
    }
  }
}

TEST_CASE("max_weight equals the subset oracle") {
  std::mt19937 rng(5);
  for (const char* a : {"0", "1", "2", "3", "w", "w+1", "w*2"}) {
    for (int i = 0; i < 150; ++i) {
      SuppVec w = random_vec(rng, 1, 10, true);
      auto got = max_weight(O(a), w);
      CHECK(got.value == oracle::schreier_norm(w, O(a)));
      CHECK(member(got.argmax, O(a)));
      Rational s;
      for (Index n : got.argmax) s += w.at(n);
      CHECK(s == got.value);
    }
  }
}

TEST_CASE("norm axioms on random samples") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> sc(-5, 5);
  for (auto model : {SpaceModel::tsirelson(), SpaceModel::schreier(O("1")), SpaceModel::schreier(O("2"))}) {
    for (int i = 0; i < 1000; ++i) {
      SuppVec x = random_vec(rng, 1, 10, false), y = random_vec(rng, 1, 10, false);
      Rational c(sc(rng), 3);
      CHECK(model.norm(x.scaled(c)) == c.abs() * model.norm(x));
      CHECK(model.norm(x + y) <= model.norm(x) + model.norm(y));
      CHECK(model.norm(x) == model.norm(x.abs()));
    }
  }
}

TEST_CASE("duality with enumerated norming points") {
  auto S = SpaceModel::schreier(O("1"));
  auto T = SpaceModel::tsirelson();
  auto KS = kpoints(S, 2, 7, 0);
  auto KT = kpoints(T, 2, 6, 2);
  std::mt19937 rng(23);
  for (int i = 0; i < 60; ++i) {
    SuppVec xs = random_vec(rng, 2, 7, true), xt = random_vec(rng, 2, 6, true);
    Rational bs, bt;
    for (const auto& p : KS) bs = max(bs, pairing_f(xs, p));
    for (const auto& p : KT) bt = max(bt, pairing_f(xt, p));
    CHECK(bs == S.norm(xs));
    CHECK(bt == T.norm(xt));
  }
}

TEST_CASE("norming points attain the norm") {
  std::mt19937 rng(29);
  for (auto model : {SpaceModel::tsirelson(), SpaceModel::schreier(O("1")), SpaceModel::tsirelson(Rational(2, 3), O("w"))}) {
    for (int i = 0; i < 200; ++i) {
      SuppVec x = random_vec(rng, 1, 12, model.kind() == SpaceModel::Kind::Schreier);
      KPoint t = model.norming_point(x);
      CHECK(pairing(x, t) == model.norm(x));
    }
  }
}

TEST_CASE("restriction is monotone for non-negative vectors") {
  auto T = SpaceModel::tsirelson();
  auto S = SpaceModel::schreier(O("2"));
  SuppVec u = V("3:1,4:1/2,5:2,7:1,8:1/3,10:1");
  for (const auto& J : oracle::subsets(u.support()))
    for (Index x : u.support()) {
      if (J.contains(x)) continue;
      CHECK(T.norm(u.restrict(J)) <= T.norm(u.restrict(J.with(x))));
      CHECK(S.norm(u.restrict(J)) <= S.norm(u.restrict(J.with(x))));
    }
}

TEST_CASE("a1_search witnesses pass check_a1 in small windows") {
  for (auto model : {SpaceModel::tsirelson(), SpaceModel::schreier(O("1"))}) {
    auto r = a1_search(model, 2, 8, {Rational(1, 2), Rational(1)});
    REQUIRE(r.worst_ratio);
    CHECK_FALSE(r.violates_declared);
    auto c = check_a1(model, r.witness);
    CHECK(c.pass);
    CHECK(c.ratio == *r.worst_ratio);
  }
}

TEST_CASE("Schreier space falls below its declared constant on spread blocks") {
  // Three normalized blocks: the middle and last ones are long averages that no single
  // S_1 set can see together, so the sum has norm close to 1 while the blocks sum to 3.
  auto S = SpaceModel::schreier(O("1"));
  BlockSeq seq{SuppVec::indicator(FinSet{3, 4, 5}, Rational(1, 3)),
               SuppVec::indicator(FinSet::range(10, 19), Rational(1, 10)),
               SuppVec::indicator(FinSet::range(100, 199), Rational(1, 100))};
  auto c = check_a1(S, seq);
  CHECK(c.ratio < Rational(1, 2));
  CHECK_FALSE(c.pass);
}

}
