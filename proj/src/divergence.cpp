#include "covgeo/divergence.hpp"

#include "covgeo/errors.hpp"
#include "covgeo/score.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iostream>
#include <sstream>

namespace covgeo {

namespace {

constexpr double kMassFloor = 1e-12;

struct Stencil {
  std::array<double, 5> d;  // D at -2dt, -dt, 0, dt, 2dt
};

StencilEstimate differentiate(const Stencil& s, double dt) {
  const auto& d = s.d;
  StencilEstimate e;
  e.first = (d[0] - 8.0 * d[1] + 8.0 * d[3] - d[4]) / (12.0 * dt);
  e.second = (-d[0] + 16.0 * d[1] - 30.0 * d[2] + 16.0 * d[3] - d[4]) / (12.0 * dt * dt);
  e.third = (-d[0] + 2.0 * d[1] - 2.0 * d[3] + d[4]) / (2.0 * dt * dt * dt);
  return e;
}

}  // namespace

std::string to_string(KlDirection direction) { return direction == KlDirection::Forward ? "forward" : "reverse"; }

PerturbationCurve::PerturbationCurve(DensityModel base, int axis) : base_(std::move(base)), axis_(axis) {
  if (axis < 0 || axis >= base_.dim()) throw InvalidArgument("perturbation curve axis out of range");
}

DensityModel PerturbationCurve::at(double t) const {
  if (t == 0.0) return base_;
  Vector shift = Vector::Zero(base_.dim());
  shift(axis_) = t;
  return base_.translated(shift);
}

double kl_divergence_raw(const DensityModel& p, const DensityModel& q, const IntegrationSpec& spec) {
  if (p.dim() != q.dim()) throw DimensionMismatch("kl_divergence: models differ in dimension");
  const QuadratureRule rule = probability_rule(p, spec);
  ChunkedSum<double> sum(0.0);
  for (Eigen::Index m = 0; m < rule.size(); ++m) {
    const double w = rule.weights(m);
    if (w == 0.0) continue;
    const Vector x = rule.points.row(m).transpose();
    const double lp = p.log_pdf(x);
    const double lq = q.log_pdf(x);
    const double term = lp - lq;
    if (!std::isfinite(term)) {
      if (w > kMassFloor) {
        std::ostringstream os;
        os << "kl_divergence: log ratio is not finite at x = " << x.transpose() << " where p carries mass " << w;
        throw SupportMismatch(os.str());
      }
      continue;
    }
    sum.add(w * term);
  }
  return sum.total();
}

double kl_divergence(const DensityModel& p, const DensityModel& q, const IntegrationSpec& spec) {
  const double d = kl_divergence_raw(p, q, spec);
  if (d < 0.0) {
    if (d < -1e-8) std::cerr << "warning: kl_divergence quadrature returned " << d << "; clamped to 0\n";
    return 0.0;
  }
  return d;
}

double default_dt(const PerturbationCurve& curve) {
  const double sd = curve.base().stddev()(curve.axis());
  return std::clamp(0.02 * sd, 1e-3, 1e-1);
}

DerivativeReport kl_derivatives(const PerturbationCurve& curve, KlDirection direction, double dt,
                                const IntegrationSpec& spec) {
  if (!(dt >= 1e-3 && dt <= 1e-1)) throw InvalidArgument("kl_derivatives: dt must lie in [1e-3, 1e-1]");
  DerivativeReport report;
  report.direction = direction;
  report.axis = curve.axis();
  report.step = dt;
  report.dt_sweep = {dt, dt / 2.0};

  const DensityModel& f = curve.base();
  auto D = [&](double t) {
    if (t == 0.0) return 0.0;
    const DensityModel ft = curve.at(t);
    const double value = direction == KlDirection::Forward ? kl_divergence_raw(f, ft, spec) : kl_divergence_raw(ft, f, spec);
    report.offsets.push_back(t);
    report.divergences.push_back(value);
    return value;
  };
  auto stencil = [&](double h) {
    Stencil s;
    for (int k = -2; k <= 2; ++k) s.d[static_cast<std::size_t>(k + 2)] = D(k * h);
    return s;
  };

  const StencilEstimate coarse = differentiate(stencil(dt), dt);
  const StencilEstimate fine = differentiate(stencil(dt / 2.0), dt / 2.0);
  report.first = coarse.first;
  report.second = coarse.second;
  report.third = coarse.third;
  report.half_step = fine;
  // first and second stencils are O(dt^4), third is O(dt^2).
  report.richardson.first = (16.0 * fine.first - coarse.first) / 15.0;
  report.richardson.second = (16.0 * fine.second - coarse.second) / 15.0;
  report.richardson.third = (4.0 * fine.third - coarse.third) / 3.0;
  return report;
}

double cubic_tensor(const PerturbationCurve& curve, double dt, const IntegrationSpec& spec) {
  return kl_derivatives(curve, KlDirection::Forward, dt, spec).richardson.third;
}

double cubic_tensor_moment(const PerturbationCurve& curve, const IntegrationSpec& spec) {
  // Along f_t(x) = f(x - t e_i): l' = -s_i(x) and l'' = d^2 log f / dx_i^2.
  const DensityModel& f = curve.base();
  const int i = curve.axis();
  return expectation(
      f,
      [&](const Vector& x) {
        const double tangent = -analytic_score(f, x)(i);
        const double curvature = analytic_score_jacobian(f, x)(i, i);
        return 3.0 * curvature * tangent + tangent * tangent * tangent;
      },
      spec);
}

AsymmetryReport asymmetry_check(const PerturbationCurve& curve, double dt, const IntegrationSpec& spec) {
  AsymmetryReport r;
  r.forward3 = kl_derivatives(curve, KlDirection::Forward, dt, spec).richardson.third;
  r.reverse3 = kl_derivatives(curve, KlDirection::Reverse, dt, spec).richardson.third;
  r.tensor = cubic_tensor_moment(curve, spec);
  r.defect = (r.forward3 - r.reverse3) - 2.0 * r.tensor;
  r.reverse_defect = r.reverse3 + r.tensor;
  return r;
}

double gentropy_via_kl(const DensityModel& base, double dt, const IntegrationSpec& spec) {
  double total = 0.0;
  for (int i = 0; i < base.dim(); ++i) {
    const PerturbationCurve curve(base, i);
    const double step = dt > 0.0 ? dt : default_dt(curve);
    total += kl_derivatives(curve, KlDirection::Forward, step, spec).richardson.second;
  }
  return total;
}

}  // namespace covgeo
