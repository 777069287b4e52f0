#include <doctest.h>

#include <cmath>

#include <hbcert/errors.hpp>
#include <hbcert/rational.hpp>

using namespace hbcert;

TEST_CASE("parse_rational accepts integers and fractions") {
  CHECK(parse_rational("3") == Rational(3));
  CHECK(parse_rational("-7") == Rational(-7));
  CHECK(parse_rational("44/59") == Rational(44, 59));
  CHECK(parse_rational("-24/119") == Rational(-24, 119));
  CHECK(parse_rational("6/4") == Rational(3, 2));  // canonicalized
  CHECK(parse_rational("-6/4") == Rational(-3, 2));
}

TEST_CASE("parse_rational rejects malformed input") {
  CHECK_THROWS_AS(parse_rational(""), ParseError);
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("1/"), ParseError);
  CHECK_THROWS_AS(parse_rational("/3"), ParseError);
  CHECK_THROWS_AS(parse_rational("1/2/3"), ParseError);
  CHECK_THROWS_AS(parse_rational("0x10"), ParseError);
  CHECK_THROWS_AS(parse_rational("1.5"), ParseError);
  CHECK_THROWS_AS(parse_rational(" 1"), ParseError);
  CHECK_THROWS_AS(parse_rational("+1"), ParseError);  // no explicit plus sign
  CHECK_THROWS_AS(parse_rational("two"), ParseError);
}

TEST_CASE("to_string mirrors parse_rational") {
  CHECK(to_string(Rational(44, 59)) == "44/59");
  CHECK(to_string(Rational(-1, 5)) == "-1/5");
  CHECK(to_string(Rational(7)) == "7");
  CHECK(to_string(Rational(0)) == "0");
  CHECK(to_string(parse_rational("-347888350813299559")) == "-347888350813299559");
}

TEST_CASE("to_double_round_up is a tight upper bound") {
  CHECK(to_double_round_up(Rational(0)) == 0.0);
  CHECK(to_double_round_up(Rational(1, 2)) == 0.5);
  CHECK(to_double_round_up(Rational(-3, 4)) == -0.75);

  const Rational third(1, 3);
  const double up = to_double_round_up(third);
  CHECK(Rational(up) >= third);
  CHECK(Rational(std::nextafter(up, 0.0)) < third);

  const Rational neg(-1, 3);
  const double nup = to_double_round_up(neg);
  CHECK(Rational(nup) >= neg);
  CHECK(Rational(std::nextafter(nup, -1.0)) < neg);
}

TEST_CASE("sqrt_round_up dominates the true root and is tight") {
  CHECK(sqrt_round_up(Rational(0)) == 0.0);
  CHECK(sqrt_round_up(Rational(9, 4)) == 1.5);
  CHECK(sqrt_round_up(Rational(4)) == 2.0);

  const Rational two(2);
  const double r = sqrt_round_up(two);
  CHECK(Rational(r) * Rational(r) >= two);
  const double below = std::nextafter(r, 0.0);
  CHECK(Rational(below) * Rational(below) < two);

  // the paper-scale residual norm: sqrt(50069)/1600
  const Rational ssq(50069, 2560000);
  const double s = sqrt_round_up(ssq);
  CHECK(Rational(s) * Rational(s) >= ssq);
  CHECK(s == doctest::Approx(0.139845).epsilon(1e-5));
}

TEST_CASE("exact_from_double is the exact binary value") {
  CHECK(exact_from_double(0.5) == Rational(1, 2));
  CHECK(exact_from_double(0.1) != Rational(1, 10));  // 0.1 is not representable
  CHECK(exact_from_double(-3.25) == Rational(-13, 4));
  const double x = 0.7440456581;
  CHECK(to_double(exact_from_double(x)) == x);
}

TEST_CASE("snap_to_decimal recovers short decimal literals") {
  CHECK(snap_to_decimal(0.7440456581, 12) == parse_rational("7440456581/10000000000"));
  CHECK(snap_to_decimal(-0.2013905597, 12) == parse_rational("-2013905597/10000000000"));
  CHECK(snap_to_decimal(0.0, 12) == Rational(0));
  CHECK(snap_to_decimal(0.75, 12) == Rational(3, 4));
  CHECK(snap_to_decimal(1234.5, 12) == Rational(2469, 2));
}

TEST_CASE("pow on rationals") {
  CHECK(pow(Rational(2, 3), 3) == Rational(8, 27));
  CHECK(pow(Rational(-1, 2), 2) == Rational(1, 4));
  CHECK(pow(Rational(5), 0) == Rational(1));
}
