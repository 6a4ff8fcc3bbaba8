#include "covgeo/density.hpp"
#include "covgeo/errors.hpp"
#include "covgeo/score.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace covgeo;

namespace {

Vector v1(double x) { return Vector::Constant(1, x); }

DensityModel std_normal(int n = 1) { return DensityModel::gaussian(Vector::Zero(n), Matrix::Identity(n, n)); }

DensityModel skew_mixture() {
  return DensityModel::gaussian_mixture(
      {0.7, 0.3}, {std_normal(), DensityModel::gaussian(Vector::Constant(1, 2.0), Matrix::Constant(1, 1, 0.25))});
}

DensityModel correlated() {
  Matrix cov(2, 2);
  cov << 2.0, 0.6, 0.6, 1.0;
  return DensityModel::gaussian(Vector(Eigen::Vector2d(1.0, -1.0)), cov);
}

}  // namespace

TEST(Score, GaussianExamples) {
  EXPECT_DOUBLE_EQ(analytic_score(std_normal(), v1(2.0))(0), -2.0);
  const auto g = correlated();
  EXPECT_LT(analytic_score(g, g.mean()).norm(), 1e-15);
  const auto e = DensityModel::exponential(Vector::Constant(1, 3.0));
  EXPECT_DOUBLE_EQ(analytic_score(e, v1(0.7))(0), -3.0);
  EXPECT_THROW(analytic_score(e, v1(-0.7)), OutOfSupport);
}

TEST(Score, KdeModelHasNoAnalyticScore) {
  SampleMatrix s{Matrix::Zero(3, 1), 0};
  s.values << 0.0, 1.0, 2.0;
  EXPECT_THROW(analytic_score(DensityModel::kde(s), v1(0.0)), UnsupportedModel);
  EXPECT_THROW(ScoreField::analytic(DensityModel::kde(s)), UnsupportedModel);
}

TEST(Score, KdeScoreExamples) {
  SampleMatrix one{Matrix::Zero(1, 1), 0};
  EXPECT_NEAR(kde_score(one, Vector::Ones(1), v1(0.5))(0), -0.5, 1e-15);
  SampleMatrix sym{Matrix(2, 1), 0};
  sym.values << -1.3, 1.3;
  EXPECT_NEAR(kde_score(sym, Vector::Ones(1), v1(0.0))(0), 0.0, 1e-15);
  SampleMatrix empty{Matrix(0, 1), 0};
  EXPECT_THROW(kde_score(empty.values, Vector::Ones(1), v1(0.0)), EmptySamples);
}

TEST(Score, KdeScoreConsistentWithGaussian) {
  const auto s = sample(std_normal(), 50000, 21);
  const auto field = ScoreField::kde(s);
  EXPECT_NEAR(field(v1(1.0))(0), -1.0, 0.15);
}

TEST(Score, KdeScoreIsGradientOfKdeDensity) {
  const auto s = sample(correlated(), 300, 4);
  const auto kde = DensityModel::kde(s);
  const Vector h = kde.as_kde().bandwidth;
  Vector x(2);
  x << 0.4, -0.9;
  const Vector a = kde_score(s, h, x);
  const Vector b = fd_score(kde, x, 1e-5);
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(Score, FdExamples) {
  EXPECT_NEAR(fd_score(std_normal(), v1(2.0), 1e-4)(0), -2.0, 1e-6);
  const auto g = correlated();
  EXPECT_LT(fd_score(g, g.mean()).cwiseAbs().maxCoeff(), 1e-8);
  const auto e = DensityModel::exponential(Vector::Ones(1));
  EXPECT_THROW(fd_score(e, v1(1e-6), 1e-4), OutOfSupport);
}

TEST(Score, FdSecondOrderConvergence) {
  const auto m = skew_mixture();
  const Vector x = v1(0.8);
  const double exact = analytic_score(m, x)(0);
  const double e1 = std::abs(fd_score(m, x, 1e-2)(0) - exact);
  const double e2 = std::abs(fd_score(m, x, 5e-3)(0) - exact);
  EXPECT_NEAR(e1 / e2, 4.0, 0.4);
}

TEST(Score, OracleAgreementAllFamilies) {
  const DensityModel models[] = {
      correlated(),
      skew_mixture(),
      DensityModel::exponential(Vector(Eigen::Vector2d(1.0, 0.5))),
      DensityModel::product({std_normal(), DensityModel::exponential(Vector::Constant(1, 2.0))}),
  };
  std::mt19937_64 rng(5);
  for (const auto& m : models) {
    const auto pts = sample(m, 100, rng());
    for (Eigen::Index k = 0; k < pts.rows(); ++k) {
      Vector x = pts.row(k).transpose();
      // keep central differences inside one-sided supports
      if (m.kind() != DensityModel::Kind::Gaussian && m.kind() != DensityModel::Kind::GaussianMixture) {
        x = x.cwiseMax(0.01);
      }
      const Vector diff = analytic_score(m, x) - fd_score(m, x, 1e-4);
      EXPECT_LE(diff.cwiseAbs().maxCoeff(), 1e-5) << m.kind_name();
    }
  }
}

TEST(Score, ZeroMeanScore) {
  for (const auto& m : {correlated(), skew_mixture()}) {
    const auto s = sample(m, 10000, 8);
    const Matrix sc = evaluate_rows(ScoreField::analytic(m), s.values);
    for (Eigen::Index i = 0; i < sc.cols(); ++i) {
      const double mean = sc.col(i).mean();
      const double sd = std::sqrt((sc.col(i).array() - mean).square().mean());
      EXPECT_LE(std::abs(mean), 3.0 * sd / 100.0);
    }
  }
}

TEST(Score, SteinIdentity) {
  const auto g = std_normal(2);
  const auto s = sample(g, 40000, 13);
  const Matrix sc = evaluate_rows(ScoreField::analytic(g), s.values);
  const Matrix m = sc.transpose() * s.values / static_cast<double>(s.rows());
  EXPECT_LT((m + Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 0.03);
}

TEST(Score, MixtureAndProductJacobians) {
  for (const auto& m : {skew_mixture(), correlated()}) {
    const Vector x = m.mean() + Vector::Constant(m.dim(), 0.3);
    const Matrix J = analytic_score_jacobian(m, x);
    for (int j = 0; j < m.dim(); ++j) {
      const double h = 1e-5;
      Vector xp = x, xm = x;
      xp(j) += h;
      xm(j) -= h;
      const Vector col = (analytic_score(m, xp) - analytic_score(m, xm)) / (2 * h);
      EXPECT_LT((J.col(j) - col).cwiseAbs().maxCoeff(), 1e-6);
    }
  }
}

TEST(Score, FieldProvenance) {
  EXPECT_EQ(ScoreField::analytic(std_normal()).source(), "analytic");
  EXPECT_EQ(ScoreField::finite_difference(std_normal()).source(), "finite_difference");
  const auto s = sample(std_normal(), 50, 1);
  const auto k = ScoreField::kde(s);
  EXPECT_TRUE(k.is_kde());
  EXPECT_EQ(k.bandwidth().size(), 1);
}
