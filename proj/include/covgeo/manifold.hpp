#pragma once

#include "covgeo/cfim.hpp"
#include "covgeo/inference.hpp"

#include <cstdint>
#include <string>
#include <variant>

namespace covgeo {

/// Synthetic data concentrated near a d-dimensional manifold in R^n.
class ManifoldSpec {
 public:
  /// x = A y + offset, y ~ N(0, I_d).
  struct LinearEmbedding {
    Matrix A;  // n x d, full column rank
    Vector offset;
  };
  /// Angle uniform on [0, 2 pi), embedded in the first two coordinates.
  struct Circle {
    double radius = 1.0;
    int ambient = 2;
  };
  /// (r cos a, r sin a, pitch * a / (2 pi)) with a uniform on [0, 2 pi turns).
  struct Helix {
    double radius = 1.0;
    double pitch = 1.0;
    double turns = 2.0;
  };

  static ManifoldSpec linear(Matrix A, Vector offset, double noise_sigma);
  static ManifoldSpec circle(double radius, int ambient, double noise_sigma);
  static ManifoldSpec helix(double radius, double pitch, double turns, double noise_sigma);

  int intrinsic_dim() const noexcept;
  int ambient_dim() const noexcept;
  double noise_sigma() const noexcept { return noise_; }
  std::string kind_name() const;

  const LinearEmbedding* linear_embedding() const { return std::get_if<LinearEmbedding>(&kind_); }
  const Circle* circle() const { return std::get_if<Circle>(&kind_); }
  const Helix* helix() const { return std::get_if<Helix>(&kind_); }

 private:
  using Kind = std::variant<LinearEmbedding, Circle, Helix>;
  ManifoldSpec(Kind kind, double noise) : kind_(std::move(kind)), noise_(noise) {}

  Kind kind_;
  double noise_;
};

/// Intrinsic coordinates mapped through the embedding plus N(0, eps^2 I)
/// ambient noise. Requires count >= 10 n.
SampleMatrix generate_manifold_data(const ManifoldSpec& spec, std::size_t count, std::uint64_t seed);

/// The exact density of linear-embedding data: N(offset, A A^T + eps^2 I).
/// Requires eps > 0.
DensityModel linear_embedding_model(const ManifoldSpec& spec);

enum class MhDecision { SupportMH, RejectMH };
std::string to_string(MhDecision decision);

struct MHReport {
  SpectralReport spectrum;
  int estimated_dim = 1;  // gap index of the descending spectrum
  int stiff_dims = 1;     // eigenvalues above the gap
  int intrinsic_dim = 1;  // n - stiff_dims, the reading for noise-concentrated data
  double gap_ratio = 1.0;
  double dominance_ratio = 1.0;
  MhDecision decision = MhDecision::RejectMH;
  double threshold = 5.0;
  std::string score_source;
};

/// Heuristic spectral-gap test. SupportMH iff the largest eigenvalue ratio
/// reaches `gap_threshold` and the gap index is below n / 2.
MHReport mh_test(const SampleMatrix& samples, const ScoreMethod& method, double gap_threshold = 5.0);

/// sum_{k <= d} lambda_k / sum_k lambda_k.
double dominance_ratio(const SpectralReport& spectrum, int d);

/// ||G_int - J^T G_amb J||_F / ||G_int||_F. Throws ShapeMismatch.
double jacobian_congruence_check(const CovariateFIM& G_ambient, const Matrix& J, const CovariateFIM& G_intrinsic);

/// I_D = E_f[u u^T] with intrinsic scores u_j(x) = d/dtau log f(x + tau J_j),
/// taken by central differences of log f rather than through the ambient
/// score.
CovariateFIM intrinsic_cfim(const DensityModel& model, const Matrix& J, const IntegrationSpec& spec);

}  // namespace covgeo
