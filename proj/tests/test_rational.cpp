#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "knapq/rational.hpp"

using knapq::BigInt;
using knapq::Rational;

TEST_CASE("construction reduces and normalizes sign") {
  CHECK(Rational::ratio(6, 4) == Rational::ratio(3, 2));
  CHECK(Rational::ratio(1, -2) == Rational::ratio(-1, 2));
  CHECK(Rational::ratio(-3, -9) == Rational::ratio(1, 3));
  CHECK(Rational::ratio(0, 7) == Rational(0));
  CHECK(Rational::ratio(10, 5).is_integer());
  CHECK(Rational::ratio(10, 5).num() == 2);
  CHECK_THROWS(Rational::ratio(1, 0));
}

TEST_CASE("parse accepts integers, fractions and decimals") {
  CHECK(Rational::parse("3/4") == Rational::ratio(3, 4));
  CHECK(Rational::parse("-1/2") == Rational::ratio(-1, 2));
  CHECK(Rational::parse("7") == Rational(7));
  CHECK(Rational::parse("0.25") == Rational::ratio(1, 4));
  CHECK(Rational::parse("-1.5") == Rational::ratio(-3, 2));
  CHECK(Rational::parse("0.125") == Rational::ratio(1, 8));
  CHECK_THROWS(Rational::parse(""));
  CHECK_THROWS(Rational::parse("1/0"));
  CHECK_THROWS(Rational::parse("abc"));
  CHECK_THROWS(Rational::parse("1.2.3"));
}

TEST_CASE("arithmetic on mixed signs") {
  const Rational a = Rational::ratio(3, 4);
  const Rational b = Rational::ratio(-2, 3);
  CHECK(a + b == Rational::ratio(1, 12));
  CHECK(a - b == Rational::ratio(17, 12));
  CHECK(a * b == Rational::ratio(-1, 2));
  CHECK(a / b == Rational::ratio(-9, 8));
  CHECK(-b == Rational::ratio(2, 3));
  CHECK_THROWS(a / Rational(0));
}

TEST_CASE("comparisons are exact cross-multiplications") {
  CHECK(Rational::ratio(1, 3) < Rational::ratio(1, 2));
  CHECK(Rational::ratio(-1, 2) < Rational::ratio(-1, 3));
  CHECK(Rational::ratio(2, 6) == Rational::ratio(1, 3));
  CHECK(Rational::ratio(100000000, 300000001) < Rational::ratio(1, 3));
  CHECK(Rational::ratio(7, 2) >= Rational::ratio(7, 2));
}

TEST_CASE("floor and ceil, including negatives") {
  CHECK(Rational::ratio(7, 2).floor() == 3);
  CHECK(Rational::ratio(7, 2).ceil() == 4);
  CHECK(Rational::ratio(-3, 2).floor() == -2);
  CHECK(Rational::ratio(-3, 2).ceil() == -1);
  CHECK(Rational(5).floor() == 5);
  CHECK(Rational(5).ceil() == 5);
  CHECK(Rational(0).floor() == 0);
}

TEST_CASE("str elides the unit denominator and round-trips") {
  CHECK(Rational::ratio(3, 4).str() == "3/4");
  CHECK(Rational(5).str() == "5");
  CHECK(Rational::ratio(-1, 2).str() == "-1/2");
  CHECK(Rational::parse(Rational::ratio(22, 7).str()) == Rational::ratio(22, 7));
}

TEST_CASE("to_double on simple fractions") {
  CHECK(Rational::ratio(1, 4).to_double() == doctest::Approx(0.25));
  CHECK(Rational::ratio(-1, 8).to_double() == doctest::Approx(-0.125));
}

TEST_CASE("randomized algebraic identities") {
  std::mt19937_64 rng(20260816);
  std::uniform_int_distribution<int64_t> num(-50, 50);
  std::uniform_int_distribution<int64_t> den(1, 30);
  for (int iter = 0; iter < 2000; ++iter) {
    const Rational a = Rational::ratio(num(rng), den(rng));
    const Rational b = Rational::ratio(num(rng), den(rng));
    CHECK(a + b == b + a);
    CHECK((a - b) + b == a);
    if (!b.is_zero()) CHECK((a * b) / b == a);
    CHECK((a < b) != (a >= b));
    const BigInt f = a.floor();
    CHECK(Rational(f) <= a);
    CHECK(a < Rational(f + 1));
    CHECK(Rational::parse(a.str()) == a);
  }
}
