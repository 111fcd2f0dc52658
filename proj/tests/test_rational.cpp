#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "transport/rational.hpp"

using transport::OverflowError;
using transport::Rational;
using transport::ValidationError;

TEST_CASE("rationals normalize to lowest terms with positive denominator") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-2, -4) == Rational(1, 2));
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(0, 7).den() == 1);
  CHECK_THROWS_AS(Rational(1, 0), ValidationError);
}

TEST_CASE("arithmetic is exact") {
  Rational a(1, 3), b(1, 6);
  CHECK(a + b == Rational(1, 2));
  CHECK(a - b == Rational(1, 6));
  CHECK(a * b == Rational(1, 18));
  CHECK(a / b == Rational(2));
  CHECK(-a == Rational(-1, 3));

  Rational sum;
  for (int i = 0; i < 7; ++i) sum += Rational(1, 7);
  CHECK(sum == Rational(1));
}

TEST_CASE("comparisons use cross multiplication") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(-1, 3));
  CHECK(Rational(2, 6) <= Rational(1, 3));
  CHECK(Rational(7, 8) > Rational(6, 7));
}

TEST_CASE("overflow raises instead of wrapping") {
  Rational huge(INT64_MAX, 1);
  CHECK_THROWS_AS(huge * Rational(2), OverflowError);
  CHECK_THROWS_AS(huge + Rational(1), OverflowError);
}

TEST_CASE("parsing handles integers, fractions, and exact decimals") {
  CHECK(Rational::parse("3") == Rational(3));
  CHECK(Rational::parse("-2") == Rational(-2));
  CHECK(Rational::parse("1/7") == Rational(1, 7));
  CHECK(Rational::parse("0.125") == Rational(1, 8));
  CHECK(Rational::parse("-0.2") == Rational(-1, 5));
  CHECK(Rational::parse("0.3333333333") == Rational(3333333333LL, 10000000000LL));
  CHECK_THROWS_AS(Rational::parse("abc"), std::exception);
  CHECK_THROWS_AS(Rational::parse(""), ValidationError);
}

TEST_CASE("string form round-trips") {
  CHECK(Rational(1, 7).str() == "1/7");
  CHECK(Rational(5).str() == "5");
  CHECK(Rational(-3, 4).str() == "-3/4");
}
