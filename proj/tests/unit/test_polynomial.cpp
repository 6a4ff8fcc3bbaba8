#include "covgeo/errors.hpp"
#include "covgeo/polynomial.hpp"

#include <gtest/gtest.h>

using namespace covgeo;

TEST(Polynomial, ParsesAndEvaluates) {
  const auto p = Polynomial::parse("2*x1 + 3*x2^2 - 1");
  EXPECT_EQ(p.max_variable(), 2);
  EXPECT_DOUBLE_EQ(p(Vector(Eigen::Vector2d(0.5, 2.0))), 1.0 + 12.0 - 1.0);
}

TEST(Polynomial, ImplicitCoefficientsAndProducts) {
  const auto p = Polynomial::parse("x1*x2 - 0.5 + x1^2 - x1^2");
  EXPECT_EQ(p.terms().size(), 2u);
  EXPECT_DOUBLE_EQ(p(Vector(Eigen::Vector2d(3.0, 2.0))), 5.5);
  EXPECT_DOUBLE_EQ(Polynomial::parse("-x1")(Vector::Constant(1, 2.0)), -2.0);
  EXPECT_DOUBLE_EQ(Polynomial::parse("1.5e-1*x1")(Vector::Constant(1, 2.0)), 0.3);
}

TEST(Polynomial, ZeroDetection) {
  EXPECT_TRUE(Polynomial::parse("0").is_zero());
  EXPECT_TRUE(Polynomial::parse("x1 - x1").is_zero());
  EXPECT_FALSE(Polynomial::parse("x1^2-1").is_zero());
}

TEST(Polynomial, RejectsMalformed) {
  for (const char* bad : {"", "x", "x0", "2*", "x1^", "x1 + + ", "y1", "x1^-1", "(x1)"}) {
    EXPECT_THROW(Polynomial::parse(bad), InvalidArgument) << bad;
  }
}

TEST(Polynomial, RoundTripThroughText) {
  const auto p = Polynomial::parse("x1^3 - 2*x1*x2 + 0.25");
  const auto q = Polynomial::parse(p.to_string());
  const Vector x = Vector(Eigen::Vector2d(0.7, -1.3));
  EXPECT_DOUBLE_EQ(p(x), q(x));
}
