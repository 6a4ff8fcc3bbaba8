#pragma once

#include "covgeo/density.hpp"

#include <string>
#include <vector>

namespace covgeo {

enum class KlDirection {
  Forward,  // D_KL(f || f_t)
  Reverse,  // D_KL(f_t || f)
};

std::string to_string(KlDirection direction);

/// Coordinate translation f_t(x) = f(x - t e_axis). Mass is preserved for
/// every t and f_0 = f.
class PerturbationCurve {
 public:
  PerturbationCurve(DensityModel base, int axis);

  const DensityModel& base() const noexcept { return base_; }
  int axis() const noexcept { return axis_; }
  DensityModel at(double t) const;

 private:
  DensityModel base_;
  int axis_;
};

struct StencilEstimate {
  double first = 0.0;
  double second = 0.0;
  double third = 0.0;
};

struct DerivativeReport {
  KlDirection direction = KlDirection::Forward;
  int axis = 0;
  double step = 0.0;                   // dt
  double first = 0.0;                  // 5-point stencils at dt
  double second = 0.0;
  double third = 0.0;
  StencilEstimate half_step;           // same stencils at dt / 2
  StencilEstimate richardson;          // extrapolated from dt and dt / 2
  std::vector<double> dt_sweep;        // {dt, dt / 2}
  std::vector<double> offsets;         // t values where D was evaluated
  std::vector<double> divergences;     // D(t) at `offsets`
};

/// D_KL(p || q) = E_p[log p - log q] under the rule of p. Small negative
/// values from quadrature are clamped to zero. Throws SupportMismatch when
/// q vanishes where p carries mass.
double kl_divergence(const DensityModel& p, const DensityModel& q, const IntegrationSpec& spec);

/// Same without the clamp; used by the stencils.
double kl_divergence_raw(const DensityModel& p, const DensityModel& q, const IntegrationSpec& spec);

/// 0.02 * sd of the base along the curve axis, clamped to [1e-3, 1e-1].
double default_dt(const PerturbationCurve& curve);

/// Derivatives of D(t) at t = 0: first and second from 5-point central
/// stencils, third from the 5-point antisymmetric stencil, each then
/// Richardson-extrapolated against dt / 2.
DerivativeReport kl_derivatives(const PerturbationCurve& curve, KlDirection direction, double dt,
                                const IntegrationSpec& spec);

/// T(h, h, h): the extrapolated third derivative of D_KL(f || f_t).
double cubic_tensor(const PerturbationCurve& curve, double dt, const IntegrationSpec& spec);

/// T from score moments, T = 3 E_f[l'' l'] + E_f[l'^3] with l = log f_t,
/// evaluated by quadrature with analytic scores. Independent of the stencils.
double cubic_tensor_moment(const PerturbationCurve& curve, const IntegrationSpec& spec);

struct AsymmetryReport {
  double forward3 = 0.0;
  double reverse3 = 0.0;
  double tensor = 0.0;          // from cubic_tensor_moment
  double defect = 0.0;          // (forward3 - reverse3) - 2 T
  double reverse_defect = 0.0;  // reverse3 + T
};

AsymmetryReport asymmetry_check(const PerturbationCurve& curve, double dt, const IntegrationSpec& spec);

/// sum_i d^2/dt^2 D_KL(f || f_{i,t}) over every axis. `dt <= 0` uses
/// default_dt per axis.
double gentropy_via_kl(const DensityModel& base, double dt, const IntegrationSpec& spec);

}  // namespace covgeo
