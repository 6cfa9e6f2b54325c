#include "doctest.h"
#include "oncs/rational.hpp"

#include <stdexcept>

using oncs::Rational;

TEST_CASE("rationals normalize on construction") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-2, 4) == Rational(1, -2));
  CHECK(Rational(-2, -4) == Rational(1, 2));
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(6, 3).str() == "2");
  CHECK(Rational(1, -2).str() == "-1/2");
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("arithmetic is exact") {
  const Rational a(1, 3), b(1, 6);
  CHECK(a + b == Rational(1, 2));
  CHECK(a - b == b);
  CHECK(a * b == Rational(1, 18));
  CHECK(a / b == Rational(2));
  CHECK(-a == Rational(-1, 3));
  CHECK((a + a + a) == Rational(1));

  // Cross products near 2^80 must reduce exactly (128-bit intermediates).
  const Rational r(1099511627791, 1099511627776);  // coprime, both ~2^40
  CHECK(r - r == Rational(0));
  CHECK(r * Rational(1099511627776, 1099511627791) == Rational(1));

  Rational sum;
  for (int i = 0; i < 100; ++i) sum += Rational(1, 3628800);  // 100 terms of 1/10!
  CHECK(sum == Rational(100, 3628800));
  CHECK(sum == Rational(1, 36288));
}

TEST_CASE("comparisons order by value") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(-1, 3));
  CHECK(Rational(2, 6) <= Rational(1, 3));
  CHECK(Rational(5) > Rational(9, 2));
  CHECK(Rational(0).is_zero());
  CHECK(Rational(-1, 5).is_negative());
  CHECK_FALSE(Rational(1, 5).is_negative());
}

TEST_CASE("parse accepts integers, fractions, and decimals") {
  CHECK(Rational::parse("7") == Rational(7));
  CHECK(Rational::parse("-3/2") == Rational(-3, 2));
  CHECK(Rational::parse("0.25") == Rational(1, 4));
  CHECK(Rational::parse("1.50") == Rational(3, 2));
  CHECK(Rational::parse("-0.125") == Rational(-1, 8));
  CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("a"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("1/"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("1.2.3"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("1/0"), std::domain_error);
}

TEST_CASE("decimal rendering is display-only and rounds half away from zero") {
  CHECK(Rational(1, 3).decimal_str(3) == "0.333");
  CHECK(Rational(2, 3).decimal_str(3) == "0.667");
  CHECK(Rational(1, 2).decimal_str(0) == "1");
  CHECK(Rational(-1, 2).decimal_str(0) == "-1");
  CHECK(Rational(-1, 3).decimal_str(2) == "-0.33");
  CHECK(Rational(3, 2).decimal_str(1) == "1.5");
  CHECK(Rational(0).decimal_str(2) == "0.00");
  CHECK_THROWS_AS(Rational(1, 3).decimal_str(-1), std::invalid_argument);
}
