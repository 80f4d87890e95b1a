#include <doctest.h>

#include "awb/errors.hpp"
#include "awb/rational.hpp"

using awb::Rational;
using awb::RootParam;

TEST_SUITE("rational") {

TEST_CASE("parse and print are canonical") {
  CHECK(Rational::parse("4/2").str() == "2");
  CHECK(Rational::parse("-3/6").str() == "-1/2");
  CHECK(Rational(6, -4).str() == "-3/2");
  CHECK_THROWS_AS(Rational::parse("1/0"), awb::ParseError);
  CHECK_THROWS_AS(Rational::parse("x"), awb::ParseError);
  CHECK_THROWS_AS(Rational::parse(""), awb::ParseError);
}

TEST_CASE("exact square roots") {
  Rational r;
  CHECK(Rational(9, 16).exact_sqrt(r));
  CHECK(r == Rational(3, 4));
  CHECK_FALSE(Rational(1, 2).exact_sqrt(r));
}

TEST_CASE("root parameters compare exactly") {
  RootParam half_root = RootParam(Rational(1, 2)).sqrt();  // ~0.7071
  CHECK(half_root.str() == "(1/2)^(1/2)");
  CHECK(half_root.less_than(Rational(71, 100)) == true);
  CHECK(half_root.greater_than(Rational(70, 100)) == true);
  CHECK(half_root.square() == RootParam(Rational(1, 2)));
  CHECK(RootParam(Rational(1, 4)).sqrt() == RootParam(Rational(1, 2)));
  CHECK(RootParam::parse("(1/16)^(1/4)") == RootParam(Rational(1, 2)));
  CHECK(RootParam::parse("(1/2)^(1/2)") == half_root);
  // lhs <= (1 + eps) y
  CHECK(RootParam(Rational(1, 2)).one_plus_times_at_least(Rational(3, 2), Rational(1)));
  CHECK_FALSE(RootParam(Rational(1, 2)).one_plus_times_at_least(Rational(31, 20), Rational(1)));
  CHECK(half_root.one_plus_times_at_least(Rational(17, 10), Rational(1)));
  CHECK_FALSE(half_root.one_plus_times_at_least(Rational(172, 100), Rational(1)));
}

TEST_CASE("root comparisons agree with floating point away from ties") {
  for (int num = 1; num < 20; ++num)
    for (unsigned k = 0; k < 4; ++k) {
      RootParam p(Rational(num, 23), k);
      for (int q = 1; q < 40; ++q) {
        Rational x(q, 40);
        double d = p.approx() - x.to_double();
        if (d > 1e-9) CHECK(p.greater_than(x));
        if (d < -1e-9) CHECK(p.less_than(x));
      }
    }
}

}
