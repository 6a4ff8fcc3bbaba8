#pragma once

#include "covgeo/cfim.hpp"
#include "covgeo/density.hpp"
#include "covgeo/polynomial.hpp"
#include "covgeo/score.hpp"

#include <functional>
#include <memory>
#include <string>

namespace covgeo {

/// A tangent direction h at a base density f, stored in score form
/// s_h = h / f. Construction subtracts E_f[s_h] under the integration rule,
/// so the stored form has zero mean on that rule exactly.
class TangentVector {
 public:
  using ScoreForm = std::function<double(const Vector&)>;

  TangentVector(DensityModel base, ScoreForm raw, const IntegrationSpec& spec, std::string label = {});

  static TangentVector zero(DensityModel base, std::string label = "0");

  const DensityModel& base() const noexcept { return *base_; }
  double operator()(const Vector& x) const { return raw_(x) - offset_; }
  double offset() const noexcept { return offset_; }
  const std::string& label() const noexcept { return label_; }

  /// a * first + b * second, on their common base.
  static TangentVector combine(double a, const TangentVector& first, double b, const TangentVector& second);

 private:
  TangentVector(std::shared_ptr<const DensityModel> base, ScoreForm raw, double offset, std::string label)
      : base_(std::move(base)), raw_(std::move(raw)), offset_(offset), label_(std::move(label)) {}

  std::shared_ptr<const DensityModel> base_;
  ScoreForm raw_;
  double offset_ = 0.0;
  std::string label_;
};

/// Score form given by a polynomial in x1..xn.
TangentVector polynomial_tangent(const DensityModel& base, const Polynomial& poly, const IntegrationSpec& spec);

/// Score form sum_j weights_j * s_j(x) with analytic coordinate scores; a
/// member of the covariate subspace.
TangentVector covariate_tangent(const DensityModel& base, const Vector& weights, const IntegrationSpec& spec);

struct ProjectionResult {
  Vector weights;     // w_h = G^{-1} v_h
  Vector cross_info;  // v_h
  double explained = 0.0;  // v^T G^{-1} v
  double residual = 0.0;   // g_f(eps, eps), eps = h - w^T s
  double total = 0.0;      // g_f(h, h)
  double capture_ratio = 0.0;
};

/// g_f(a, b) = E_f[s_a s_b]. Throws BaseMismatch.
double fisher_rao_inner(const DensityModel& base, const TangentVector& a, const TangentVector& b,
                        const IntegrationSpec& spec);

/// (v_h)_j = E_f[s_h s_j].
Vector cross_information_vector(const DensityModel& base, const TangentVector& h, const ScoreField& scores,
                                const IntegrationSpec& spec);

/// Projects h onto the span of the coordinate scores. The residual is
/// integrated directly from eps = h - w^T s, so explained + residual = total
/// is a check rather than a definition. Throws SingularMetric, ZeroTangent.
ProjectionResult project_tangent(const TangentVector& h, const CovariateFIM& G, const Vector& v,
                                 const ScoreField& scores, const IntegrationSpec& spec);

/// Quadrature cFIM, cross-information and projection with analytic scores.
ProjectionResult decompose(const TangentVector& h, const IntegrationSpec& spec);

/// Bhattacharyya coefficient integral of sqrt(f1 f2).
double bhattacharyya(const DensityModel& f1, const DensityModel& f2, const IntegrationSpec& spec);

/// 2 arccos(BC), with BC clamped to [0, 1].
double fisher_rao_distance(const DensityModel& f1, const DensityModel& f2, const IntegrationSpec& spec);

}  // namespace covgeo
