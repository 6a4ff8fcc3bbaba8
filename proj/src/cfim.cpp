#include "covgeo/cfim.hpp"

#include "covgeo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace covgeo {

namespace {

struct SortedEigen {
  Vector values;
  Matrix vectors;
};

SortedEigen sorted_eigen(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  if (eig.info() != Eigen::Success) throw NumericalError("symmetric eigendecomposition failed");
  const auto n = m.rows();
  // Eigen returns ascending order.
  SortedEigen out{Vector(n), Matrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = eig.eigenvalues()(n - 1 - k);
    Vector v = eig.eigenvectors().col(n - 1 - k);
    Eigen::Index lead = 0;
    v.cwiseAbs().maxCoeff(&lead);
    if (v(lead) < 0.0) v = -v;
    out.vectors.col(k) = v;
  }
  return out;
}

}  // namespace

CovariateFIM make_cfim(const Matrix& matrix, std::size_t sample_count, std::string score_source) {
  if (matrix.rows() != matrix.cols() || matrix.rows() < 1) throw ShapeMismatch("cfim must be a non-empty square matrix");
  return CovariateFIM{0.5 * (matrix + matrix.transpose()), sample_count, std::move(score_source)};
}

CovariateFIM empirical_cfim(const ScoreField& scores, const SampleMatrix& samples, std::size_t max_eval_rows) {
  validate(samples);
  if (samples.dim() != scores.dim()) throw DimensionMismatch("empirical_cfim: sample and score dimensions differ");
  const auto N = static_cast<std::size_t>(samples.rows());
  const std::size_t stride = (max_eval_rows > 0 && N > max_eval_rows) ? (N + max_eval_rows - 1) / max_eval_rows : 1;
  const auto n = samples.dim();
  ChunkedSum<Matrix> acc(Matrix::Zero(n, n));
  std::size_t used = 0;
  for (std::size_t k = 0; k < N; k += stride) {
    const Vector s = scores(samples.row(static_cast<Eigen::Index>(k)));
    if (!s.allFinite()) throw NonFiniteIntegrand("empirical_cfim: score is not finite at a sample row");
    acc.add(s * s.transpose());
    ++used;
  }
  std::string tag = scores.source();
  if (stride > 1) tag += "/strided:" + std::to_string(used);
  return make_cfim(acc.total() / static_cast<double>(used), used, tag);
}

Matrix score_gram(const QuadratureRule& rule, const ScoreField& scores) {
  const auto n = scores.dim();
  ChunkedSum<Matrix> acc(Matrix::Zero(n, n));
  for (Eigen::Index m = 0; m < rule.size(); ++m) {
    const double w = rule.weights(m);
    if (w == 0.0) continue;
    const Vector s = scores(rule.points.row(m).transpose());
    if (!s.allFinite()) throw NonFiniteIntegrand("score is not finite at a quadrature point");
    acc.add(w * (s * s.transpose()));
  }
  const Matrix g = acc.total();
  return 0.5 * (g + g.transpose());
}

CovariateFIM quadrature_cfim(const DensityModel& model, const IntegrationSpec& spec) {
  const ScoreField scores = ScoreField::analytic(model);
  return make_cfim(score_gram(probability_rule(model, spec), scores), 0, "analytic/quadrature:" + spec.describe());
}

double g_entropy(const CovariateFIM& G) { return G.matrix.trace(); }

SpectralReport spectrum(const CovariateFIM& G, double gap_threshold) {
  SortedEigen eig = sorted_eigen(G.matrix);
  SpectralReport report;
  report.gap_threshold = gap_threshold;
  const auto n = eig.values.size();
  const double top = std::max(0.0, eig.values(0));
  for (Eigen::Index k = 0; k < n; ++k) {
    if (eig.values(k) < 0.0) {
      if (eig.values(k) < -1e-10 * top) {
        std::ostringstream os;
        os << "cfim has eigenvalue " << eig.values(k) << " below -1e-10 * " << top << "; matrix:\n" << G.matrix;
        throw NumericalError(os.str());
      }
      std::ostringstream os;
      os << "clipped eigenvalue " << eig.values(k) << " to 0";
      report.warnings.push_back(os.str());
      eig.values(k) = 0.0;
    }
  }
  report.eigenvalues = eig.values;
  report.eigenvectors = eig.vectors;

  if (n >= 2 && top > 0.0) {
    const double floor = 1e-12 * top;
    report.gap_ratio = -1.0;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
      const double ratio = eig.values(k) / std::max(eig.values(k + 1), floor);
      if (ratio > report.gap_ratio) {  // first maximum wins
        report.gap_ratio = ratio;
        report.gap_index = static_cast<int>(k + 1);
      }
    }
  }
  report.significant_gap = n >= 2 && report.gap_ratio >= gap_threshold;
  const double total = eig.values.sum();
  report.dominance_ratio = total > 0.0 ? eig.values.head(report.gap_index).sum() / total : 1.0;
  return report;
}

InvertibilityResult check_invertibility(const CovariateFIM& G, double cond_threshold) {
  if (!(cond_threshold > 1.0)) throw InvalidArgument("cond_threshold must exceed 1");
  const SortedEigen eig = sorted_eigen(G.matrix);
  const auto n = eig.values.size();
  const double top = eig.values(0);
  const double cut = top / cond_threshold;
  if (top > 0.0 && eig.values(n - 1) >= cut) {
    const Vector inv = eig.values.cwiseInverse();
    Matrix inverse = eig.vectors * inv.asDiagonal() * eig.vectors.transpose();
    return Invertible{0.5 * (inverse + inverse.transpose())};
  }
  std::vector<Eigen::Index> null_cols;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!(eig.values(k) >= cut) || top <= 0.0) null_cols.push_back(k);
  }
  Matrix basis(n, static_cast<Eigen::Index>(null_cols.size()));
  for (std::size_t c = 0; c < null_cols.size(); ++c) basis.col(static_cast<Eigen::Index>(c)) = eig.vectors.col(null_cols[c]);
  return Singular{basis};
}

Matrix require_inverse(const CovariateFIM& G, double cond_threshold) {
  auto result = check_invertibility(G, cond_threshold);
  if (auto* inv = std::get_if<Invertible>(&result)) return std::move(inv->inverse);
  throw SingularMetric("covariate information matrix is singular", std::get<Singular>(result).null_space);
}

}  // namespace covgeo
