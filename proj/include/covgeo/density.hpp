#pragma once

#include "covgeo/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace covgeo {

/// Axis-aligned integration box.
struct Box {
  Vector lower;
  Vector upper;
};

class DensityModel;

namespace model {

struct Gaussian {
  Vector mean;
  Matrix covariance;
  Matrix precision;
  Matrix cholesky;  // lower factor L with covariance = L L^T
  double log_norm = 0.0;
};

struct GaussianMixture {
  std::vector<double> weights;
  std::vector<Gaussian> components;
};

/// Independent exponentials, coordinate i supported on x_i > location_i.
struct Exponential {
  Vector rates;
  Vector location;
};

/// Independent one-dimensional marginals.
struct Product {
  std::vector<DensityModel> marginals;
};

/// Gaussian-kernel density estimate with a per-coordinate bandwidth.
struct Kde {
  Matrix samples;
  Vector bandwidth;
  double log_norm = 0.0;
};

}  // namespace model

/// An evaluable probability density on R^n. Immutable after construction.
class DensityModel {
 public:
  enum class Kind { Gaussian, GaussianMixture, Exponential, Product, Kde };

  static DensityModel gaussian(Vector mean, Matrix covariance);
  static DensityModel gaussian_mixture(std::vector<double> weights, std::vector<DensityModel> components);
  static DensityModel exponential(Vector rates, Vector location = {});
  static DensityModel product(std::vector<DensityModel> marginals);
  /// Empty `bandwidth` selects the Silverman rule.
  static DensityModel kde(const SampleMatrix& samples, Vector bandwidth = {});

  Kind kind() const noexcept;
  std::string kind_name() const;
  int dim() const noexcept { return dim_; }
  bool is_analytic() const noexcept { return kind() != Kind::Kde; }

  /// log f(x); -infinity outside the support.
  double log_pdf(const Vector& x) const;
  double pdf(const Vector& x) const;

  /// The density x -> f(x - shift).
  DensityModel translated(const Vector& shift) const;

  Vector mean() const;
  Vector stddev() const;

  /// Bounding box used by default tensor-grid rules: mean +- 8 sd for
  /// Gaussians, [loc, loc + 20/rate] for exponentials.
  Box default_box() const;

  const model::Gaussian& as_gaussian() const;
  const model::GaussianMixture& as_mixture() const;
  const model::Exponential& as_exponential() const;
  const model::Product& as_product() const;
  const model::Kde& as_kde() const;

  friend bool operator==(const DensityModel& a, const DensityModel& b);

 private:
  using Rep = std::variant<model::Gaussian, model::GaussianMixture, model::Exponential, model::Product, model::Kde>;

  DensityModel(Rep rep, int dim) : rep_(std::move(rep)), dim_(dim) {}

  Rep rep_;
  int dim_;
};

/// h_i = 1.06 * sd_i * N^(-1/(n+4)).
Vector silverman_bandwidth(const SampleMatrix& samples);

/// f(x). Throws DimensionMismatch; points outside the support give 0.
double eval_pdf(const DensityModel& model, const Vector& x);

/// Draws `count` rows. A pure function of (model, count, seed).
SampleMatrix sample(const DensityModel& model, std::size_t count, std::uint64_t seed);

/// How E_f[.] is evaluated.
class IntegrationSpec {
 public:
  struct TensorGrid {
    int points_per_axis = 64;
    std::optional<Box> box;
  };
  struct MonteCarlo {
    std::size_t draws = 100000;
    std::uint64_t seed = 1;
  };

  static IntegrationSpec grid(int points_per_axis, std::optional<Box> box = std::nullopt);
  static IntegrationSpec monte_carlo(std::size_t draws, std::uint64_t seed);
  /// Gauss-Legendre grid with clamp(200000^(1/n), 16, 128) points per axis.
  static IntegrationSpec default_for(int dim);

  bool is_grid() const noexcept { return std::holds_alternative<TensorGrid>(method_); }
  const TensorGrid& tensor_grid() const { return std::get<TensorGrid>(method_); }
  const MonteCarlo& monte_carlo() const { return std::get<MonteCarlo>(method_); }
  std::string describe() const;

 private:
  explicit IntegrationSpec(std::variant<TensorGrid, MonteCarlo> method) : method_(std::move(method)) {}

  std::variant<TensorGrid, MonteCarlo> method_;
};

/// Points and probability weights realizing E_f[g] = sum_j weight_j g(point_j).
/// Grid rules carry w_j f(x_j); Monte Carlo rules carry 1/M.
struct QuadratureRule {
  Matrix points;  // M x n
  Vector weights;

  Eigen::Index size() const noexcept { return points.rows(); }
};

/// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<Vector, Vector> gauss_legendre(int count);

/// Plain (Lebesgue) tensor-product Gauss-Legendre rule over a box.
QuadratureRule tensor_grid(const Box& box, int points_per_axis);

QuadratureRule probability_rule(const DensityModel& model, const IntegrationSpec& spec);

/// E_f[integrand]; throws NonFiniteIntegrand if any weighted evaluation is
/// NaN or infinite.
double expectation(const DensityModel& model, const std::function<double(const Vector&)>& integrand,
                   const IntegrationSpec& spec);

/// Same, on a prebuilt rule.
double expectation(const QuadratureRule& rule, const std::function<double(const Vector&)>& integrand);

}  // namespace covgeo
