#include <gtest/gtest.h>

#include "hypermatch/rational.hpp"
#include "hypermatch/rng.hpp"

using namespace hypermatch;

TEST(Rational, ToStringAlwaysHasDenominator) {
  EXPECT_EQ(to_string(Rational(3)), "3/1");
  EXPECT_EQ(to_string(make_rational(6, 8)), "3/4");
  EXPECT_EQ(to_string(make_rational(-2, 4)), "-1/2");
  EXPECT_EQ(to_string(Rational(0)), "0/1");
}

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
  EXPECT_EQ(parse_rational("4/6"), make_rational(2, 3));
  EXPECT_EQ(parse_rational(" 7 "), Rational(7));
  EXPECT_EQ(parse_rational("0.125"), make_rational(1, 8));
  EXPECT_EQ(parse_rational("-2.5"), make_rational(-5, 2));
  EXPECT_EQ(parse_rational(".5"), make_rational(1, 2));
  EXPECT_EQ(parse_rational("1."), Rational(1));
  EXPECT_EQ(parse_rational("+3/9"), make_rational(1, 3));
}

TEST(Rational, DecimalsAreExact) {
  // 0.1 is not representable in binary; the parsed value must be exactly 1/10.
  EXPECT_EQ(parse_rational("0.1") * 10, Rational(1));
  EXPECT_EQ(parse_rational("0.333"), make_rational(333, 1000));
}

TEST(Rational, RejectsMalformedLiterals) {
  for (const char* bad : {"", "1/0", "a", "1/-2", "1.2.3", "1/2/3", "--1", ".", "1/"}) {
    EXPECT_THROW(parse_rational(bad), std::invalid_argument) << bad;
  }
  EXPECT_THROW(make_rational(1, 0), std::invalid_argument);
}

TEST(Rational, RoundTripsThroughText) {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const long num = static_cast<long>(rng.below(2001)) - 1000;
    const long den = 1 + static_cast<long>(rng.below(999));
    const Rational r = make_rational(num, den);
    EXPECT_EQ(parse_rational(to_string(r)), r);
  }
}

TEST(Rational, MakeRationalCanonicalizes) {
  const Rational a = make_rational(8, 4);
  EXPECT_EQ(a.get_den(), 1);
  EXPECT_TRUE(is_integer(a));
  EXPECT_EQ(a, Rational(2));
}

TEST(Rational, BinomialsAndRounding) {
  EXPECT_EQ(binomial(6, 3), 20);
  EXPECT_EQ(binomial_u64(60, 3), 34220u);
  EXPECT_EQ(binomial_signed(-1, 2), 0);
  EXPECT_EQ(binomial_signed(3, 5), 0);
  EXPECT_THROW(binomial_u64(200, 100), std::overflow_error);
  EXPECT_EQ(ceil(make_rational(7, 3)), 3);
  EXPECT_EQ(floor(make_rational(7, 3)), 2);
  EXPECT_EQ(ceil(make_rational(-7, 3)), -2);
  EXPECT_EQ(ceil(Rational(4)), 4);
  EXPECT_EQ(pow(make_rational(2, 3), 3), make_rational(8, 27));
}

TEST(Rng, IsDeterministicPerSeed) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    differs = differs || x != c();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, SplitDoesNotAdvanceParent) {
  Rng a(5), b(5);
  Rng child = a.split(3);
  EXPECT_EQ(a(), b());
  Rng again = Rng(5).split(3);
  EXPECT_EQ(child(), again());
  EXPECT_NE(Rng(5).split(3)(), Rng(5).split(4)());
}

TEST(Rng, UniformAndBelowStayInRange) {
  Rng rng(9);
  double sum = 0;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    ASSERT_LT(rng.below(7), 7u);
  }
  EXPECT_NEAR(sum / 10000, 0.5, 0.02);
}
