#pragma once

#include "covgeo/density.hpp"

#include <memory>
#include <string>
#include <variant>

namespace covgeo {

/// x -> grad_x log f(x), backed by a closed form, a Gaussian KDE, or central
/// differences of log f.
class ScoreField {
 public:
  static ScoreField analytic(DensityModel model);
  /// Empty `bandwidth` selects the Silverman rule.
  static ScoreField kde(const SampleMatrix& samples, Vector bandwidth = {});
  /// `step <= 0` selects the default step 1e-4 * (1 + |x_i|).
  static ScoreField finite_difference(DensityModel model, double step = 0.0);

  int dim() const noexcept { return dim_; }
  Vector operator()(const Vector& x) const;
  /// Provenance tag: "analytic", "kde" or "finite_difference".
  std::string source() const;
  bool is_kde() const noexcept;
  /// The KDE bandwidth, for kde fields.
  const Vector& bandwidth() const;

 private:
  struct Analytic {
    DensityModel model;
  };
  struct Kde {
    Matrix samples;
    Vector bandwidth;
  };
  struct FiniteDifference {
    DensityModel model;
    double step;
  };

  ScoreField(std::variant<Analytic, Kde, FiniteDifference> source, int dim)
      : source_(std::make_shared<const std::variant<Analytic, Kde, FiniteDifference>>(std::move(source))), dim_(dim) {}

  std::shared_ptr<const std::variant<Analytic, Kde, FiniteDifference>> source_;
  int dim_;
};

/// Closed-form score. Throws UnsupportedModel for KDE models and
/// OutOfSupport outside the support.
Vector analytic_score(const DensityModel& model, const Vector& x);

/// Closed-form Hessian of log f (the Jacobian of the score).
Matrix analytic_score_jacobian(const DensityModel& model, const Vector& x);

/// Exact gradient of the log Gaussian-KDE density: the responsibility-weighted
/// average of the kernel scores (X_k - x) / h^2.
Vector kde_score(const Matrix& samples, const Vector& bandwidth, const Vector& x);
Vector kde_score(const SampleMatrix& samples, const Vector& bandwidth, const Vector& x);

/// Central difference of log f per coordinate.
Vector fd_score(const DensityModel& model, const Vector& x, double step = 0.0);

/// Scores at every row, one row per observation.
Matrix evaluate_rows(const ScoreField& scores, const Matrix& points);

}  // namespace covgeo
