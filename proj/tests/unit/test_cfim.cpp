#include "covgeo/cfim.hpp"
#include "covgeo/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace covgeo;

namespace {

DensityModel gaussian_diag(std::initializer_list<double> variances) {
  Vector v(static_cast<Eigen::Index>(variances.size()));
  Eigen::Index i = 0;
  for (double x : variances) v(i++) = x;
  return DensityModel::gaussian(Vector::Zero(v.size()), v.asDiagonal());
}

CovariateFIM wrap(const Matrix& m) { return make_cfim(m, 0, "test"); }

}  // namespace

TEST(Cfim, EmpiricalGaussianVariance4) {
  const auto g = gaussian_diag({4.0});
  const auto s = sample(g, 100000, 3);
  const auto G = empirical_cfim(ScoreField::analytic(g), s);
  EXPECT_NEAR(G.matrix(0, 0), 0.25, 0.25 * 0.03);
  EXPECT_EQ(G.sample_count, 100000u);
}

TEST(Cfim, EmpiricalStandardGaussian3) {
  const auto g = gaussian_diag({1.0, 1.0, 1.0});
  const auto G = empirical_cfim(ScoreField::analytic(g), sample(g, 100000, 5));
  EXPECT_LT((G.matrix - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 0.03);
}

TEST(Cfim, SingleSampleIsRankOne) {
  const auto g = gaussian_diag({1.0, 1.0});
  const auto s = sample(g, 1, 9);
  const Vector sc = analytic_score(g, s.row(0));
  const auto G = empirical_cfim(ScoreField::analytic(g), s);
  EXPECT_LT((G.matrix - sc * sc.transpose()).norm(), 1e-14);
}

TEST(Cfim, DimensionMismatch) {
  const auto g = gaussian_diag({1.0, 1.0});
  EXPECT_THROW(empirical_cfim(ScoreField::analytic(g), sample(gaussian_diag({1.0}), 10, 1)), DimensionMismatch);
}

TEST(Cfim, QuadratureExamples) {
  const auto G = quadrature_cfim(gaussian_diag({1.0, 4.0}), IntegrationSpec::default_for(2));
  EXPECT_LT((G.matrix - Vector(Eigen::Vector2d(1.0, 0.25)).asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff(), 1e-4);
  EXPECT_NEAR(g_entropy(G), 1.25, 1e-4);
  const auto E = quadrature_cfim(DensityModel::exponential(Vector::Constant(1, 3.0)), IntegrationSpec::grid(128));
  EXPECT_NEAR(E.matrix(0, 0), 9.0, 1e-6);
  EXPECT_NEAR(quadrature_cfim(gaussian_diag({1.0}), IntegrationSpec::grid(128)).matrix(0, 0), 1.0, 1e-8);
}

TEST(Cfim, QuadratureRejectsKde) {
  const auto s = sample(gaussian_diag({1.0}), 20, 1);
  EXPECT_THROW(quadrature_cfim(DensityModel::kde(s), IntegrationSpec::grid(32)), UnsupportedModel);
}

TEST(Cfim, GEntropyOfIdentity) { EXPECT_DOUBLE_EQ(g_entropy(wrap(Matrix::Identity(3, 3))), 3.0); }

TEST(Cfim, SpectrumDiagonal) {
  const auto r = spectrum(wrap(Vector(Eigen::Vector2d(1.0, 100.0)).asDiagonal()));
  EXPECT_DOUBLE_EQ(r.eigenvalues(0), 100.0);
  EXPECT_DOUBLE_EQ(r.eigenvalues(1), 1.0);
  EXPECT_EQ(r.gap_index, 1);
  EXPECT_TRUE(r.significant_gap);
  EXPECT_NEAR(r.dominance_ratio, 100.0 / 101.0, 1e-15);
}

TEST(Cfim, SpectrumDegenerateTieBreak) {
  const auto r = spectrum(wrap(Matrix::Identity(4, 4)));
  EXPECT_EQ(r.gap_index, 1);
  EXPECT_DOUBLE_EQ(r.gap_ratio, 1.0);
  EXPECT_FALSE(r.significant_gap);
}

TEST(Cfim, SpectrumInvariants) {
  Matrix a = Matrix::Random(5, 5);
  const auto G = wrap(a * a.transpose());
  const auto r = spectrum(G);
  EXPECT_NEAR(r.eigenvalues.sum(), g_entropy(G), 1e-8 * g_entropy(G));
  EXPECT_LT((r.eigenvectors.transpose() * r.eigenvectors - Matrix::Identity(5, 5)).norm(), 1e-8);
  for (int k = 0; k + 1 < 5; ++k) EXPECT_GE(r.eigenvalues(k), r.eigenvalues(k + 1));
}

TEST(Cfim, SpectrumClipsTinyNegativesAndRejectsLarge) {
  Matrix m = Vector(Eigen::Vector2d(1.0, -1e-12)).asDiagonal();
  const auto r = spectrum(wrap(m));
  EXPECT_EQ(r.eigenvalues(1), 0.0);
  EXPECT_FALSE(r.warnings.empty());
  Matrix bad = Vector(Eigen::Vector2d(1.0, -1e-3)).asDiagonal();
  EXPECT_THROW(spectrum(wrap(bad)), NumericalError);
}

TEST(Cfim, InvertibilityExamples) {
  const auto g = gaussian_diag({1.0, 1.0});
  const auto G = empirical_cfim(ScoreField::analytic(g), sample(g, 20000, 2));
  const auto inv = check_invertibility(G);
  ASSERT_TRUE(std::holds_alternative<Invertible>(inv));
  EXPECT_LT((std::get<Invertible>(inv).inverse - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 0.05);

  const auto scalar = check_invertibility(wrap(Matrix::Constant(1, 1, 0.25)));
  ASSERT_TRUE(std::holds_alternative<Invertible>(scalar));
  EXPECT_NEAR(std::get<Invertible>(scalar).inverse(0, 0), 4.0, 1e-14);
}

TEST(Cfim, DuplicatedCoordinateIsSingular) {
  auto s = sample(gaussian_diag({1.0}), 2000, 4);
  SampleMatrix dup{Matrix(s.rows(), 2), 0};
  dup.values << s.values, s.values;
  const auto G = empirical_cfim(ScoreField::kde(dup), dup);
  const auto r = check_invertibility(G);
  ASSERT_TRUE(std::holds_alternative<Singular>(r));
  const Matrix ns = std::get<Singular>(r).null_space;
  ASSERT_EQ(ns.cols(), 1);
  const Vector expected = Vector(Eigen::Vector2d(1.0, -1.0)) / std::sqrt(2.0);
  EXPECT_LT((ns.col(0) - expected).norm(), 1e-3);
  try {
    require_inverse(G);
    FAIL();
  } catch (const SingularMetric& e) {
    EXPECT_EQ(e.null_space().cols(), 1);
  }
}

TEST(Cfim, EstimatorConsistency) {
  const auto g = gaussian_diag({1.0, 1.0, 1.0});
  const Matrix I = Matrix::Identity(3, 3);
  const auto field = ScoreField::analytic(g);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const double small = (empirical_cfim(field, sample(g, 1000, seed)).matrix - I).norm();
    const double large = (empirical_cfim(field, sample(g, 100000, seed + 100)).matrix - I).norm();
    EXPECT_LT(large, small) << "seed " << seed;
  }
}

TEST(Cfim, KdeStrideIsRecorded) {
  const auto g = gaussian_diag({1.0});
  const auto s = sample(g, 3000, 1);
  const auto G = empirical_cfim(ScoreField::kde(s), s, 1000);
  EXPECT_NE(G.score_source.find("strided"), std::string::npos);
  EXPECT_NEAR(G.matrix(0, 0), 1.0, 0.2);
}

TEST(Cfim, Symmetrized) {
  Matrix m(2, 2);
  m << 1.0, 0.2, 0.4, 1.0;
  const auto G = wrap(m);
  EXPECT_DOUBLE_EQ(G.matrix(0, 1), G.matrix(1, 0));
}
