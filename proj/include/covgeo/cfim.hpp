#pragma once

#include "covgeo/density.hpp"
#include "covgeo/score.hpp"

#include <string>
#include <variant>
#include <vector>

namespace covgeo {

/// Symmetric PSD Gram matrix of the coordinate scores, G_ij = E_f[s_i s_j].
struct CovariateFIM {
  Matrix matrix;
  std::size_t sample_count = 0;  // 0 for quadrature
  std::string score_source;

  int dim() const noexcept { return static_cast<int>(matrix.rows()); }
};

/// Symmetrizes `matrix` and wraps it.
CovariateFIM make_cfim(const Matrix& matrix, std::size_t sample_count, std::string score_source);

struct SpectralReport {
  Vector eigenvalues;    // descending, clipped at zero
  Matrix eigenvectors;   // orthonormal columns, matching `eigenvalues`
  int gap_index = 1;     // argmax_k lambda_k / lambda_{k+1}, 1-based
  double gap_ratio = 1.0;
  double dominance_ratio = 1.0;
  double gap_threshold = 5.0;
  bool significant_gap = false;
  std::vector<std::string> warnings;
};

/// Rows evaluated by default when empirical cFIMs use KDE scores; the KDE
/// itself is always built from every sample.
inline constexpr std::size_t kDefaultKdeEvalRows = 5000;

/// (1/N) sum_k s(X_k) s(X_k)^T. A nonzero `max_eval_rows` below N averages
/// over an evenly strided subset of rows instead.
CovariateFIM empirical_cfim(const ScoreField& scores, const SampleMatrix& samples, std::size_t max_eval_rows = 0);

/// Entrywise quadrature of E_f[s_i s_j] with analytic scores.
CovariateFIM quadrature_cfim(const DensityModel& model, const IntegrationSpec& spec);

/// Gram matrix E_f[s_i s_j] of an arbitrary score field under a rule.
Matrix score_gram(const QuadratureRule& rule, const ScoreField& scores);

/// G-entropy H_G = Tr(G).
double g_entropy(const CovariateFIM& G);

SpectralReport spectrum(const CovariateFIM& G, double gap_threshold = 5.0);

struct Invertible {
  Matrix inverse;
};
struct Singular {
  Matrix null_space;  // columns span the near-null eigenspace
};
using InvertibilityResult = std::variant<Invertible, Singular>;

InvertibilityResult check_invertibility(const CovariateFIM& G, double cond_threshold = 1e10);

/// The inverse, or throws SingularMetric carrying the null-space witness.
Matrix require_inverse(const CovariateFIM& G, double cond_threshold = 1e10);

}  // namespace covgeo
