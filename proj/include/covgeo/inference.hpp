#pragma once

#include "covgeo/cfim.hpp"
#include "covgeo/density.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace covgeo {

/// A translation-equivariant location estimator.
class EstimatorSpec {
 public:
  enum class Kind { SampleMean, CoordinatewiseMedian, TrimmedMean };

  static EstimatorSpec sample_mean() { return EstimatorSpec(Kind::SampleMean, 0.0); }
  static EstimatorSpec coordinatewise_median() { return EstimatorSpec(Kind::CoordinatewiseMedian, 0.0); }
  /// Drops floor(fraction * N) observations from each end per coordinate.
  static EstimatorSpec trimmed_mean(double fraction);
  /// "mean", "median", or "trimmed:<fraction>".
  static EstimatorSpec parse(const std::string& name);

  Kind kind() const noexcept { return kind_; }
  double trim_fraction() const noexcept { return fraction_; }
  std::string name() const;

  Vector estimate(const SampleMatrix& samples) const;

 private:
  EstimatorSpec(Kind kind, double fraction) : kind_(kind), fraction_(fraction) {}

  Kind kind_;
  double fraction_;
};

/// How scores are obtained for the empirical cFIM.
struct AnalyticScores {
  DensityModel model;
};
struct KdeScores {
  Vector bandwidth;  // empty: Silverman
  std::size_t max_eval_rows = kDefaultKdeEvalRows;
};
using ScoreMethod = std::variant<AnalyticScores, KdeScores>;

ScoreField make_score_field(const ScoreMethod& method, const SampleMatrix& samples);
CovariateFIM estimate_cfim(const ScoreMethod& method, const SampleMatrix& samples);

/// Per-observation Covariate CRLB, the inverse of the empirical cFIM. The
/// bound for an N-sample estimator is this matrix divided by N.
/// Throws SingularMetric carrying the null-space witness.
Matrix covariate_crlb(const SampleMatrix& samples, const ScoreMethod& method);

/// psi*(x) = G^{-1} s(x). Throws SingularMetric.
Vector canonical_influence(const CovariateFIM& G, const Vector& score_at_x);

/// Covariance of `n_reps` independent estimates, each from `n_per_rep`
/// draws with seed `seed + rep`, scaled by `n_per_rep`.
Matrix estimator_covariance(const EstimatorSpec& est, const DensityModel& model, std::size_t n_per_rep,
                            std::size_t n_reps, std::uint64_t seed);

/// Tr(crlb) / Tr(est_cov). Throws ZeroVariance.
double efficiency_ratio(const Matrix& crlb, const Matrix& est_cov);

struct EfficiencyReport {
  std::string estimator;
  Matrix crlb;
  Matrix est_cov;
  double eff = 0.0;
  std::size_t n_reps = 0;
  std::size_t n_per_rep = 0;
  std::size_t crlb_samples = 0;
  bool alignment_assumed = true;
  std::string notes;
};

/// Full benchmark: CRLB from `crlb_samples` draws of `model` with the given
/// score method, replication covariance of `est`, and their trace ratio.
EfficiencyReport efficiency_benchmark(const EstimatorSpec& est, const DensityModel& model, const ScoreMethod& method,
                                      std::size_t crlb_samples, std::size_t n_per_rep, std::size_t n_reps,
                                      std::uint64_t seed);

}  // namespace covgeo
