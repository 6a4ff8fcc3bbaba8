#include "covgeo/geometry.hpp"

#include "covgeo/errors.hpp"

#include <algorithm>
#include <cmath>

namespace covgeo {

TangentVector::TangentVector(DensityModel base, ScoreForm raw, const IntegrationSpec& spec, std::string label)
    : base_(std::make_shared<const DensityModel>(std::move(base))), raw_(std::move(raw)), label_(std::move(label)) {
  if (!raw_) throw InvalidArgument("tangent vector needs a score form");
  offset_ = expectation(*base_, raw_, spec);
}

TangentVector TangentVector::zero(DensityModel base, std::string label) {
  return TangentVector(std::make_shared<const DensityModel>(std::move(base)), [](const Vector&) { return 0.0; }, 0.0,
                       std::move(label));
}

TangentVector TangentVector::combine(double a, const TangentVector& first, double b, const TangentVector& second) {
  if (!(first.base() == second.base())) throw BaseMismatch("combine: tangent vectors live at different base densities");
  auto form = [a, b, first, second](const Vector& x) { return a * first(x) + b * second(x); };
  return TangentVector(first.base_, form, 0.0, "combination");
}

TangentVector polynomial_tangent(const DensityModel& base, const Polynomial& poly, const IntegrationSpec& spec) {
  if (poly.max_variable() > base.dim()) throw DimensionMismatch("tangent polynomial uses a variable beyond the base dimension");
  return TangentVector(base, [poly](const Vector& x) { return poly(x); }, spec, poly.to_string());
}

TangentVector covariate_tangent(const DensityModel& base, const Vector& weights, const IntegrationSpec& spec) {
  if (weights.size() != base.dim()) throw DimensionMismatch("covariate_tangent: weight length differs from base dimension");
  const ScoreField scores = ScoreField::analytic(base);
  return TangentVector(base, [scores, weights](const Vector& x) { return weights.dot(scores(x)); }, spec, "covariate");
}

double fisher_rao_inner(const DensityModel& base, const TangentVector& a, const TangentVector& b,
                        const IntegrationSpec& spec) {
  if (!(a.base() == base) || !(b.base() == base)) throw BaseMismatch("fisher_rao_inner: tangent vectors live at a different base");
  return expectation(base, [&](const Vector& x) { return a(x) * b(x); }, spec);
}

Vector cross_information_vector(const DensityModel& base, const TangentVector& h, const ScoreField& scores,
                                const IntegrationSpec& spec) {
  if (!(h.base() == base)) throw BaseMismatch("cross_information_vector: tangent lives at a different base");
  if (scores.dim() != base.dim()) throw DimensionMismatch("cross_information_vector: score dimension differs from base");
  const QuadratureRule rule = probability_rule(base, spec);
  const auto n = base.dim();
  ChunkedSum<Vector> acc(Vector::Zero(n));
  for (Eigen::Index m = 0; m < rule.size(); ++m) {
    const double w = rule.weights(m);
    if (w == 0.0) continue;
    const Vector x = rule.points.row(m).transpose();
    const Vector term = w * h(x) * scores(x);
    if (!term.allFinite()) throw NonFiniteIntegrand("cross information integrand is not finite");
    acc.add(term);
  }
  return acc.total();
}

ProjectionResult project_tangent(const TangentVector& h, const CovariateFIM& G, const Vector& v,
                                 const ScoreField& scores, const IntegrationSpec& spec) {
  if (v.size() != G.dim() || scores.dim() != G.dim()) throw DimensionMismatch("project_tangent: dimension mismatch");
  const Matrix G_inv = require_inverse(G);
  ProjectionResult out;
  out.cross_info = v;
  out.weights = G_inv * v;
  out.explained = v.dot(out.weights);
  const DensityModel& base = h.base();
  out.total = fisher_rao_inner(base, h, h, spec);
  if (!(out.total > 0.0)) throw ZeroTangent("project_tangent: tangent has zero Fisher-Rao length");
  const Vector w = out.weights;
  out.residual = expectation(
      base,
      [&](const Vector& x) {
        const double eps = h(x) - w.dot(scores(x));
        return eps * eps;
      },
      spec);
  out.capture_ratio = out.explained / out.total;
  return out;
}

ProjectionResult decompose(const TangentVector& h, const IntegrationSpec& spec) {
  const DensityModel& base = h.base();
  const ScoreField scores = ScoreField::analytic(base);
  const CovariateFIM G = quadrature_cfim(base, spec);
  const Vector v = cross_information_vector(base, h, scores, spec);
  return project_tangent(h, G, v, scores, spec);
}

double bhattacharyya(const DensityModel& f1, const DensityModel& f2, const IntegrationSpec& spec) {
  if (f1.dim() != f2.dim()) throw DimensionMismatch("bhattacharyya: models differ in dimension");
  if (!spec.is_grid()) {
    // Importance form: E_{f1}[sqrt(f2 / f1)].
    return expectation(
        f1,
        [&](const Vector& x) {
          const double l2 = f2.log_pdf(x);
          return std::isfinite(l2) ? std::exp(0.5 * (l2 - f1.log_pdf(x))) : 0.0;
        },
        spec);
  }
  const auto& g = spec.tensor_grid();
  Box box;
  if (g.box) {
    box = *g.box;
  } else {
    const Box a = f1.default_box();
    const Box b = f2.default_box();
    box = Box{a.lower.cwiseMin(b.lower), a.upper.cwiseMax(b.upper)};
  }
  const QuadratureRule rule = tensor_grid(box, g.points_per_axis);
  ChunkedSum<double> sum(0.0);
  for (Eigen::Index m = 0; m < rule.size(); ++m) {
    const Vector x = rule.points.row(m).transpose();
    const double l = 0.5 * (f1.log_pdf(x) + f2.log_pdf(x));
    if (std::isfinite(l)) sum.add(rule.weights(m) * std::exp(l));
  }
  return sum.total();
}

double fisher_rao_distance(const DensityModel& f1, const DensityModel& f2, const IntegrationSpec& spec) {
  const double bc = std::clamp(bhattacharyya(f1, f2, spec), 0.0, 1.0);
  return 2.0 * std::acos(bc);
}

}  // namespace covgeo
