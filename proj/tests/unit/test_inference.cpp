#include "covgeo/errors.hpp"
#include "covgeo/inference.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace covgeo;

namespace {

DensityModel gauss1(double var) { return DensityModel::gaussian(Vector::Zero(1), Matrix::Constant(1, 1, var)); }

DensityModel diag2(double a, double b) {
  return DensityModel::gaussian(Vector::Zero(2), Vector(Eigen::Vector2d(a, b)).asDiagonal());
}

}  // namespace

TEST(Estimator, ParseAndName) {
  EXPECT_EQ(EstimatorSpec::parse("mean").kind(), EstimatorSpec::Kind::SampleMean);
  EXPECT_EQ(EstimatorSpec::parse("median").kind(), EstimatorSpec::Kind::CoordinatewiseMedian);
  const auto t = EstimatorSpec::parse("trimmed:0.1");
  EXPECT_EQ(t.kind(), EstimatorSpec::Kind::TrimmedMean);
  EXPECT_DOUBLE_EQ(t.trim_fraction(), 0.1);
  EXPECT_EQ(EstimatorSpec::parse(t.name()).trim_fraction(), 0.1);
  EXPECT_THROW(EstimatorSpec::parse("mode"), InvalidArgument);
  EXPECT_THROW(EstimatorSpec::trimmed_mean(0.5), InvalidArgument);
}

TEST(Estimator, KnownValues) {
  SampleMatrix s{Matrix(5, 1), 0};
  s.values << 1.0, 2.0, 100.0, 3.0, 4.0;
  EXPECT_DOUBLE_EQ(EstimatorSpec::sample_mean().estimate(s)(0), 22.0);
  EXPECT_DOUBLE_EQ(EstimatorSpec::coordinatewise_median().estimate(s)(0), 3.0);
  EXPECT_DOUBLE_EQ(EstimatorSpec::trimmed_mean(0.2).estimate(s)(0), 3.0);
  SampleMatrix even{Matrix(4, 1), 0};
  even.values << 4.0, 1.0, 3.0, 2.0;
  EXPECT_DOUBLE_EQ(EstimatorSpec::coordinatewise_median().estimate(even)(0), 2.5);
}

TEST(Estimator, TranslationEquivariance) {
  const auto s = sample(diag2(1.0, 4.0), 101, 3);
  const Vector c = Vector(Eigen::Vector2d(3.5, -2.25));
  SampleMatrix shifted{s.values.rowwise() + c.transpose(), 0};
  for (const auto& est : {EstimatorSpec::sample_mean(), EstimatorSpec::coordinatewise_median(),
                          EstimatorSpec::trimmed_mean(0.1)}) {
    EXPECT_LT((est.estimate(shifted) - est.estimate(s) - c).cwiseAbs().maxCoeff(), 1e-12) << est.name();
  }
}

TEST(Crlb, GaussianExamples) {
  const auto g = gauss1(4.0);
  const Matrix b = covariate_crlb(sample(g, 100000, 1), AnalyticScores{g});
  EXPECT_NEAR(b(0, 0), 4.0, 0.2);
  const auto g2 = diag2(1.0, 1.0);
  const Matrix b2 = covariate_crlb(sample(g2, 100000, 2), AnalyticScores{g2});
  EXPECT_LT((b2 - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 0.05);
}

TEST(Crlb, CongruenceWithTextbookInformation) {
  for (double var : {0.5, 2.0}) {
    const auto g = gauss1(var);
    const Matrix b = covariate_crlb(sample(g, 100000, 7), AnalyticScores{g});
    EXPECT_NEAR(1.0 / b(0, 0), 1.0 / var, 0.03 / var);
  }
}

TEST(Crlb, DuplicatedCoordinatesAreSingular) {
  const auto s = sample(gauss1(1.0), 1000, 4);
  SampleMatrix dup{Matrix(s.rows(), 2), 0};
  dup.values << s.values, s.values;
  EXPECT_THROW(covariate_crlb(dup, KdeScores{}), SingularMetric);
}

TEST(Crlb, CanonicalInfluenceExamples) {
  const auto I = make_cfim(Matrix::Identity(2, 2), 0, "test");
  EXPECT_LT((canonical_influence(I, Vector(Eigen::Vector2d(0.5, -1.0))) - Vector(Eigen::Vector2d(0.5, -1.0))).norm(),
            1e-15);
  const auto D = make_cfim(Vector(Eigen::Vector2d(4.0, 1.0)).asDiagonal(), 0, "test");
  EXPECT_LT((canonical_influence(D, Vector(Eigen::Vector2d(1.0, 1.0))) - Vector(Eigen::Vector2d(0.25, 1.0))).norm(),
            1e-15);
  const auto g = gauss1(3.0);
  const auto G = make_cfim(Matrix::Constant(1, 1, 1.0 / 3.0), 0, "test");
  EXPECT_NEAR(canonical_influence(G, analytic_score(g, Vector::Constant(1, 1.7)))(0), -1.7, 1e-12);
  EXPECT_THROW(canonical_influence(make_cfim(Matrix::Zero(2, 2), 0, "z"), Vector::Ones(2)), SingularMetric);
}

TEST(Crlb, CanonicalInfluenceCovarianceIsInverseMetric) {
  const Matrix cov = (Matrix(2, 2) << 2.0, 0.5, 0.5, 1.0).finished();
  const auto g = DensityModel::gaussian(Vector::Zero(2), cov);
  const auto s = sample(g, 100000, 12);
  const auto G = estimate_cfim(AnalyticScores{g}, s);
  Matrix acc = Matrix::Zero(2, 2);
  for (Eigen::Index k = 0; k < s.rows(); ++k) {
    const Vector psi = canonical_influence(G, analytic_score(g, s.row(k)));
    acc += psi * psi.transpose();
  }
  acc /= static_cast<double>(s.rows());
  const Matrix Ginv = G.matrix.inverse();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(acc(i, j), Ginv(i, j), 0.05 * Ginv.cwiseAbs().maxCoeff());
}

TEST(Replication, EstimatorCovarianceExamples) {
  const Matrix m = estimator_covariance(EstimatorSpec::sample_mean(), gauss1(1.0), 500, 2000, 1);
  EXPECT_NEAR(m(0, 0), 1.0, 0.1);
  const Matrix med = estimator_covariance(EstimatorSpec::coordinatewise_median(), gauss1(1.0), 500, 2000, 2);
  EXPECT_NEAR(med(0, 0), M_PI / 2.0, 0.157);
  const Matrix d = estimator_covariance(EstimatorSpec::sample_mean(), diag2(1.0, 4.0), 200, 1000, 3);
  EXPECT_NEAR(d(0, 0), 1.0, 0.1);
  EXPECT_NEAR(d(1, 1), 4.0, 0.4);
}

TEST(Replication, DeterministicAndValidated) {
  const auto est = EstimatorSpec::sample_mean();
  EXPECT_TRUE(estimator_covariance(est, gauss1(1.0), 50, 100, 9) == estimator_covariance(est, gauss1(1.0), 50, 100, 9));
  EXPECT_THROW(estimator_covariance(est, gauss1(1.0), 50, 99, 9), InvalidArgument);
}

TEST(Efficiency, RatioExamples) {
  const Matrix a = (Matrix(2, 2) << 2.0, 0.1, 0.1, 1.0).finished();
  EXPECT_DOUBLE_EQ(efficiency_ratio(a, a), 1.0);
  EXPECT_THROW(efficiency_ratio(a, Matrix::Zero(2, 2)), ZeroVariance);
  EXPECT_THROW(efficiency_ratio(a, Matrix::Identity(3, 3)), ShapeMismatch);
}

TEST(Efficiency, BenchmarkMeanAndMedian) {
  const auto g = gauss1(1.0);
  const auto mean = efficiency_benchmark(EstimatorSpec::sample_mean(), g, AnalyticScores{g}, 100000, 500, 2000, 1);
  EXPECT_GE(mean.eff, 0.9);
  EXPECT_LE(mean.eff, 1.1);
  EXPECT_TRUE(mean.alignment_assumed);
  EXPECT_FALSE(mean.notes.empty());
  const auto med =
      efficiency_benchmark(EstimatorSpec::coordinatewise_median(), g, AnalyticScores{g}, 100000, 500, 2000, 1);
  EXPECT_NEAR(med.eff, 2.0 / M_PI, 0.07);
}

TEST(Efficiency, CrlbDominance) {
  const auto g = diag2(1.0, 2.0);
  for (const auto& est : {EstimatorSpec::sample_mean(), EstimatorSpec::coordinatewise_median(),
                          EstimatorSpec::trimmed_mean(0.1)}) {
    const auto r = efficiency_benchmark(est, g, AnalyticScores{g}, 50000, 200, 1000, 5);
    const double slack = 0.05 * r.crlb.trace();
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<Matrix>(r.est_cov - r.crlb).eigenvalues().minCoeff(), -slack - 0.1 * r.crlb.trace())
        << est.name();
    EXPECT_LE(r.eff, 1.1) << est.name();
  }
}
