#include "covgeo/density.hpp"
#include "covgeo/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace covgeo;

namespace {

DensityModel std_normal() { return DensityModel::gaussian(Vector::Zero(1), Matrix::Identity(1, 1)); }

DensityModel skew_mixture() {
  return DensityModel::gaussian_mixture(
      {0.7, 0.3}, {std_normal(), DensityModel::gaussian(Vector::Constant(1, 2.0), Matrix::Constant(1, 1, 0.25))});
}

Vector v1(double x) { return Vector::Constant(1, x); }

}  // namespace

TEST(Density, GaussianPdfClosedForm) {
  const double c = 1.0 / std::sqrt(2.0 * M_PI);
  EXPECT_NEAR(eval_pdf(std_normal(), v1(0.0)), c, 1e-15);
  EXPECT_NEAR(eval_pdf(std_normal(), v1(1.0)), c * std::exp(-0.5), 1e-15);
}

TEST(Density, KdeOfTwoPointsMatchesHandComputation) {
  SampleMatrix s{Matrix(2, 1), 0};
  s.values << -1.0, 1.0;
  const auto kde = DensityModel::kde(s, Vector::Ones(1));
  EXPECT_NEAR(eval_pdf(kde, v1(0.0)), std::exp(-0.5) / std::sqrt(2.0 * M_PI), 1e-12);
}

TEST(Density, CorrelatedGaussianLogPdf) {
  Matrix cov(2, 2);
  cov << 2.0, 0.6, 0.6, 1.0;
  Vector mu(2);
  mu << 1.0, -1.0;
  const auto g = DensityModel::gaussian(mu, cov);
  Vector x(2);
  x << 0.3, 0.2;
  const Vector d = x - mu;
  const double expected =
      -0.5 * d.dot(cov.inverse() * d) - std::log(2.0 * M_PI) - 0.5 * std::log(cov.determinant());
  EXPECT_NEAR(g.log_pdf(x), expected, 1e-12);
}

TEST(Density, ExponentialOutsideSupportIsZero) {
  const auto e = DensityModel::exponential(Vector::Constant(1, 2.0));
  EXPECT_EQ(eval_pdf(e, v1(-0.1)), 0.0);
  EXPECT_TRUE(std::isinf(e.log_pdf(v1(-0.1))));
  EXPECT_NEAR(eval_pdf(e, v1(0.5)), 2.0 * std::exp(-1.0), 1e-14);
}

TEST(Density, DimensionMismatchThrows) {
  EXPECT_THROW(eval_pdf(std_normal(), Vector::Zero(2)), DimensionMismatch);
}

TEST(Density, InvalidModelsRejected) {
  Matrix bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;
  EXPECT_THROW(DensityModel::gaussian(Vector::Zero(2), bad), InvalidArgument);
  EXPECT_THROW(DensityModel::exponential(Vector::Constant(1, -1.0)), InvalidArgument);
  EXPECT_THROW(DensityModel::gaussian_mixture({0.5, 0.6}, {std_normal(), std_normal()}), InvalidArgument);
}

TEST(Density, SampleMeanWithinClt) {
  const auto s = sample(std_normal(), 10000, 7);
  EXPECT_LT(std::abs(s.values.mean()), 0.05);
}

TEST(Density, SampleShapeAndDeterminism) {
  Matrix cov = Matrix::Identity(3, 3);
  const auto g = DensityModel::gaussian(Vector::Zero(3), cov);
  const auto one = sample(g, 1, 5);
  EXPECT_EQ(one.rows(), 1);
  EXPECT_EQ(one.dim(), 3);
  for (const auto& m : {g, skew_mixture(), DensityModel::exponential(Vector::Ones(2))}) {
    const auto a = sample(m, 500, 11);
    const auto b = sample(m, 500, 11);
    EXPECT_TRUE(a.values == b.values);
    EXPECT_FALSE(a.values == sample(m, 500, 12).values);
  }
}

TEST(Density, ExpectationNormalizationAllFamilies) {
  const DensityModel models[] = {
      std_normal(),
      DensityModel::gaussian(Vector::Zero(2), Vector(Eigen::Vector2d(1.0, 4.0)).asDiagonal()),
      skew_mixture(),
      DensityModel::exponential(Vector::Constant(1, 2.0)),
      DensityModel::product({std_normal(), DensityModel::exponential(Vector::Ones(1))}),
  };
  for (const auto& m : models) {
    EXPECT_NEAR(expectation(m, [](const Vector&) { return 1.0; }, IntegrationSpec::default_for(m.dim())), 1.0, 1e-4)
        << m.kind_name();
  }
}

TEST(Density, ExpectationMoments) {
  const auto g = DensityModel::gaussian(Vector::Zero(1), Matrix::Constant(1, 1, 4.0));
  EXPECT_NEAR(expectation(g, [](const Vector& x) { return x(0) * x(0); }, IntegrationSpec::grid(128)), 4.0, 0.08);
  const auto e = DensityModel::exponential(Vector::Constant(1, 2.0));
  EXPECT_NEAR(expectation(e, [](const Vector& x) { return x(0); }, IntegrationSpec::grid(128)), 0.5, 0.01);
  EXPECT_NEAR(expectation(g, [](const Vector& x) { return x(0) * x(0); }, IntegrationSpec::monte_carlo(100000, 3)),
              4.0, 0.08);
}

TEST(Density, ExpectationRejectsNonFinite) {
  EXPECT_THROW(expectation(std_normal(), [](const Vector&) { return NAN; }, IntegrationSpec::grid(32)),
               NonFiniteIntegrand);
}

TEST(Density, MonteCarloExpectationDeterministic) {
  const auto spec = IntegrationSpec::monte_carlo(20000, 9);
  auto f = [](const Vector& x) { return std::sin(x(0)) + x(0) * x(0); };
  EXPECT_EQ(expectation(skew_mixture(), f, spec), expectation(skew_mixture(), f, spec));
}

TEST(Density, TailDecayGaussianFamilies) {
  const DensityModel models[] = {
      std_normal(),
      skew_mixture(),
      DensityModel::product({std_normal(), DensityModel::gaussian(Vector::Constant(1, 3.0), Matrix::Constant(1, 1, 9.0))}),
  };
  for (const auto& m : models) {
    const Box box = m.default_box();
    double mode = 0.0;
    for (double t = box.lower(0); t <= box.upper(0); t += 1e-3 * (box.upper(0) - box.lower(0))) {
      Vector x = m.mean();
      x(0) = t;
      mode = std::max(mode, eval_pdf(m, x));
    }
    Vector lo = m.mean(), hi = m.mean();
    lo(0) = box.lower(0);
    hi(0) = box.upper(0);
    EXPECT_LT(eval_pdf(m, lo), 1e-10 * mode) << m.kind_name();
    EXPECT_LT(eval_pdf(m, hi), 1e-10 * mode) << m.kind_name();
  }
}

TEST(Density, SilvermanBandwidth) {
  SampleMatrix s{Matrix(4, 1), 0};
  s.values << 1.0, 2.0, 3.0, 4.0;
  const double sd = std::sqrt(5.0 / 3.0);
  EXPECT_NEAR(silverman_bandwidth(s)(0), 1.06 * sd * std::pow(4.0, -0.2), 1e-12);
}

TEST(Density, TranslationShiftsDensity) {
  const auto m = skew_mixture();
  const auto t = m.translated(v1(0.4));
  for (double x : {-1.0, 0.3, 2.2}) EXPECT_NEAR(t.log_pdf(v1(x)), m.log_pdf(v1(x - 0.4)), 1e-14);
}

TEST(Density, GaussLegendreIntegratesPolynomialsExactly) {
  const auto [nodes, weights] = gauss_legendre(8);
  EXPECT_NEAR(weights.sum(), 2.0, 1e-14);
  EXPECT_NEAR((weights.array() * nodes.array().pow(14)).sum(), 2.0 / 15.0, 1e-14);
}

TEST(Density, TensorGridSizeGuard) {
  Box box{Vector::Constant(4, -1.0), Vector::Constant(4, 1.0)};
  EXPECT_THROW(tensor_grid(box, 128), InvalidArgument);
  EXPECT_THROW(IntegrationSpec::grid(4), InvalidArgument);
  EXPECT_THROW(IntegrationSpec::monte_carlo(10, 1), InvalidArgument);
}

TEST(ChunkedSum, MatchesNaiveAndIsOrderFixed) {
  ChunkedSum<double> acc(0.0);
  double naive = 0.0;
  for (int i = 0; i < 100000; ++i) {
    acc.add(1.0 / (i + 1));
    naive += 1.0 / (i + 1);
  }
  EXPECT_NEAR(acc.total(), naive, 1e-10);
}
