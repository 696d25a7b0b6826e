#include <gtest/gtest.h>

#include <cstdlib>
#include <limits>
#include <random>

#include "tic/rational.hpp"

using tic::Rational;
using tic::RationalParseError;

TEST(Rational, LowestTermsWithPositiveDenominator) {
  Rational r(6, -4);
  EXPECT_EQ(r.num(), -3);
  EXPECT_EQ(r.den(), 2);
  EXPECT_EQ(Rational(0, -7), Rational(0));
  EXPECT_EQ(Rational(0, -7).den(), 1);
}

TEST(Rational, ZeroDenominatorThrows) { EXPECT_THROW(Rational(1, 0), std::domain_error); }

TEST(Rational, Arithmetic) {
  Rational a(1, 3), b(1, 6);
  EXPECT_EQ(a + b, Rational(1, 2));
  EXPECT_EQ(a - b, Rational(1, 6));
  EXPECT_EQ(a * b, Rational(1, 18));
  EXPECT_EQ(a / b, Rational(2));
  EXPECT_EQ(-a, Rational(-1, 3));
  EXPECT_THROW(a / Rational(0), std::domain_error);
}

TEST(Rational, Ordering) {
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
  EXPECT_GT(Rational(-1, 3), Rational(-1, 2));
  EXPECT_EQ(Rational(2, 4) <=> Rational(1, 2), std::strong_ordering::equal);
}

TEST(Rational, Floor) {
  EXPECT_EQ(Rational(7, 2).floor(), 3);
  EXPECT_EQ(Rational(-7, 2).floor(), -4);
  EXPECT_EQ(Rational(-4).floor(), -4);
  EXPECT_EQ(Rational(999, 1000).floor(), 0);
}

TEST(Rational, OverflowIsReportedNotWrapped) {
  Rational big(std::numeric_limits<std::int64_t>::max());
  EXPECT_THROW(big + Rational(1), std::overflow_error);
  EXPECT_THROW(big * Rational(2), std::overflow_error);
  // Large intermediates that reduce back into range are fine.
  Rational x(std::numeric_limits<std::int64_t>::max(), 3);
  EXPECT_EQ(x * Rational(3), big);
}

TEST(Rational, ParseForms) {
  EXPECT_EQ(Rational::parse("3/2"), Rational(3, 2));
  EXPECT_EQ(Rational::parse("-3/6"), Rational(-1, 2));
  EXPECT_EQ(Rational::parse("0.25"), Rational(1, 4));
  EXPECT_EQ(Rational::parse("-1.5"), Rational(-3, 2));
  EXPECT_EQ(Rational::parse("0.1"), Rational(1, 10));
  EXPECT_EQ(Rational::parse("42"), Rational(42));
  EXPECT_EQ(Rational::parse("+7"), Rational(7));
}

TEST(Rational, ParseDiagnostics) {
  auto reason = [](const char* s) {
    try {
      Rational::parse(s);
    } catch (const RationalParseError& e) {
      return e.reason();
    }
    ADD_FAILURE() << "no error for " << s;
    return RationalParseError::Reason::Malformed;
  };
  EXPECT_EQ(reason("1/0"), RationalParseError::Reason::ZeroDenominator);
  EXPECT_EQ(reason(""), RationalParseError::Reason::Malformed);
  EXPECT_EQ(reason("abc"), RationalParseError::Reason::Malformed);
  EXPECT_EQ(reason("1/"), RationalParseError::Reason::Malformed);
  EXPECT_EQ(reason("1.2.3"), RationalParseError::Reason::Malformed);
  EXPECT_EQ(reason("1."), RationalParseError::Reason::Malformed);
  EXPECT_EQ(reason("1/-2"), RationalParseError::Reason::Malformed);
  EXPECT_EQ(reason("99999999999999999999999"), RationalParseError::Reason::Overflow);
}

TEST(Rational, CanonicalText) {
  EXPECT_EQ(Rational(5, 3).to_string(), "5/3");
  EXPECT_EQ(Rational(4, 2).to_string(), "2");
  EXPECT_EQ(Rational(-1, 4).to_string(), "-1/4");
}

TEST(Rational, DecimalRendering) {
  EXPECT_EQ(Rational(5, 3).to_decimal(), "1.666666666667");
  EXPECT_EQ(Rational(1, 3).to_decimal(), "0.333333333333");
  EXPECT_EQ(Rational(-2, 3).to_decimal(), "-0.666666666667");
  EXPECT_EQ(Rational(3, 2).to_decimal(), "1.5");
  EXPECT_EQ(Rational(0).to_decimal(), "0");
  EXPECT_EQ(Rational(30).to_decimal(), "30");
  EXPECT_EQ(Rational(1, 1000000).to_decimal(), "0.000001");
  EXPECT_EQ(Rational(1, 3000000).to_decimal(), "0.000000333333333333");
  EXPECT_EQ(Rational(9999999999999, 10000000000000).to_decimal(), "1");
}

// parse(serialize(x)) == x, and the decimal rendering re-parses to within
// 1e-12 of the exact value.
TEST(Rational, RoundTripProperty) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 5000; ++i) {
    std::int64_t num = static_cast<std::int64_t>(rng() % 2000001) - 1000000;
    std::int64_t den = static_cast<std::int64_t>(rng() % 100000) + 1;
    Rational x(num, den);
    ASSERT_EQ(Rational::parse(x.to_string()), x);
    Rational shown = Rational::parse(x.to_decimal());
    ASSERT_LE(tic::abs(shown - x), Rational(1, 1000000000000)) << x << " -> " << x.to_decimal();
  }
}
