#include "covgeo/manifold.hpp"

#include "covgeo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace covgeo {

ManifoldSpec ManifoldSpec::linear(Matrix A, Vector offset, double noise_sigma) {
  if (!(noise_sigma >= 0.0)) throw InvalidArgument("noise_sigma must be nonnegative");
  const auto n = A.rows();
  const auto d = A.cols();
  if (d < 1 || d >= n) throw InvalidArgument("linear embedding needs 1 <= d < n");
  if (offset.size() == 0) offset = Vector::Zero(n);
  if (offset.size() != n) throw DimensionMismatch("linear embedding offset length differs from ambient dimension");
  Eigen::ColPivHouseholderQR<Matrix> qr(A);
  if (qr.rank() < d) throw InvalidArgument("linear embedding matrix is not full column rank");
  return ManifoldSpec(LinearEmbedding{std::move(A), std::move(offset)}, noise_sigma);
}

ManifoldSpec ManifoldSpec::circle(double radius, int ambient, double noise_sigma) {
  if (!(noise_sigma >= 0.0)) throw InvalidArgument("noise_sigma must be nonnegative");
  if (!(radius > 0.0)) throw InvalidArgument("circle radius must be positive");
  if (ambient < 2) throw InvalidArgument("circle needs an ambient dimension of at least 2");
  return ManifoldSpec(Circle{radius, ambient}, noise_sigma);
}

ManifoldSpec ManifoldSpec::helix(double radius, double pitch, double turns, double noise_sigma) {
  if (!(noise_sigma >= 0.0)) throw InvalidArgument("noise_sigma must be nonnegative");
  if (!(radius > 0.0) || !(turns > 0.0)) throw InvalidArgument("helix radius and turns must be positive");
  return ManifoldSpec(Helix{radius, pitch, turns}, noise_sigma);
}

int ManifoldSpec::intrinsic_dim() const noexcept {
  if (const auto* l = linear_embedding()) return static_cast<int>(l->A.cols());
  return 1;
}

int ManifoldSpec::ambient_dim() const noexcept {
  if (const auto* l = linear_embedding()) return static_cast<int>(l->A.rows());
  if (const auto* c = circle()) return c->ambient;
  return 3;
}

std::string ManifoldSpec::kind_name() const {
  if (linear_embedding()) return "linear";
  if (circle()) return "circle";
  return "helix";
}

SampleMatrix generate_manifold_data(const ManifoldSpec& spec, std::size_t count, std::uint64_t seed) {
  const int n = spec.ambient_dim();
  if (count < 10 * static_cast<std::size_t>(n)) throw InvalidArgument("generate_manifold_data needs count >= 10 n");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  SampleMatrix out;
  out.seed = seed;
  out.values.resize(static_cast<Eigen::Index>(count), n);
  for (Eigen::Index k = 0; k < out.values.rows(); ++k) {
    Vector x = Vector::Zero(n);
    if (const auto* l = spec.linear_embedding()) {
      Vector y(l->A.cols());
      for (Eigen::Index j = 0; j < y.size(); ++j) y(j) = normal(rng);
      x = l->A * y + l->offset;
    } else if (const auto* c = spec.circle()) {
      const double angle = 2.0 * std::numbers::pi * uniform(rng);
      x(0) = c->radius * std::cos(angle);
      x(1) = c->radius * std::sin(angle);
    } else {
      const auto* h = spec.helix();
      const double angle = 2.0 * std::numbers::pi * h->turns * uniform(rng);
      x(0) = h->radius * std::cos(angle);
      x(1) = h->radius * std::sin(angle);
      x(2) = h->pitch * angle / (2.0 * std::numbers::pi);
    }
    if (spec.noise_sigma() > 0.0) {
      for (Eigen::Index i = 0; i < n; ++i) x(i) += spec.noise_sigma() * normal(rng);
    }
    out.values.row(k) = x.transpose();
  }
  return out;
}

DensityModel linear_embedding_model(const ManifoldSpec& spec) {
  const auto* l = spec.linear_embedding();
  if (!l) throw UnsupportedModel("only linear embeddings have a closed-form density");
  if (!(spec.noise_sigma() > 0.0)) throw InvalidArgument("linear embedding density needs positive noise");
  const auto n = l->A.rows();
  const double var = spec.noise_sigma() * spec.noise_sigma();
  return DensityModel::gaussian(l->offset, l->A * l->A.transpose() + var * Matrix::Identity(n, n));
}

std::string to_string(MhDecision decision) { return decision == MhDecision::SupportMH ? "SupportMH" : "RejectMH"; }

MHReport mh_test(const SampleMatrix& samples, const ScoreMethod& method, double gap_threshold) {
  validate(samples);
  const auto n = samples.dim();
  if (n < 2) throw InvalidArgument("mh_test needs at least two coordinates");
  if (samples.rows() < 10 * n) throw InvalidArgument("mh_test needs N >= 10 n");
  const CovariateFIM G = estimate_cfim(method, samples);
  MHReport report;
  report.spectrum = spectrum(G, gap_threshold);
  report.score_source = G.score_source;
  report.threshold = gap_threshold;
  report.estimated_dim = report.spectrum.gap_index;
  report.stiff_dims = report.spectrum.gap_index;
  report.intrinsic_dim = static_cast<int>(n) - report.stiff_dims;
  report.gap_ratio = report.spectrum.gap_ratio;
  report.dominance_ratio = dominance_ratio(report.spectrum, report.estimated_dim);
  const bool low_rank = static_cast<double>(report.estimated_dim) < static_cast<double>(n) / 2.0;
  report.decision = report.gap_ratio >= gap_threshold && low_rank ? MhDecision::SupportMH : MhDecision::RejectMH;
  return report;
}

double dominance_ratio(const SpectralReport& spectrum, int d) {
  const auto n = spectrum.eigenvalues.size();
  if (d < 1 || d > n) throw InvalidArgument("dominance_ratio: d must lie in [1, n]");
  if (d == n) return 1.0;
  const double total = spectrum.eigenvalues.sum();
  if (!(total > 0.0)) return 1.0;
  return spectrum.eigenvalues.head(d).sum() / total;
}

double jacobian_congruence_check(const CovariateFIM& G_ambient, const Matrix& J, const CovariateFIM& G_intrinsic) {
  const auto n = G_ambient.matrix.rows();
  const auto d = G_intrinsic.matrix.rows();
  if (J.rows() != n || J.cols() != d) throw ShapeMismatch("jacobian must be n x d matching the two metrics");
  const double scale = G_intrinsic.matrix.norm();
  if (!(scale > 0.0)) throw InvalidArgument("intrinsic metric is zero");
  return (G_intrinsic.matrix - J.transpose() * G_ambient.matrix * J).norm() / scale;
}

CovariateFIM intrinsic_cfim(const DensityModel& model, const Matrix& J, const IntegrationSpec& spec) {
  if (J.rows() != model.dim()) throw ShapeMismatch("jacobian rows must match the model dimension");
  const auto d = J.cols();
  const QuadratureRule rule = probability_rule(model, spec);
  ChunkedSum<Matrix> acc(Matrix::Zero(d, d));
  Vector u(d);
  for (Eigen::Index m = 0; m < rule.size(); ++m) {
    const double w = rule.weights(m);
    if (w == 0.0) continue;
    const Vector x = rule.points.row(m).transpose();
    for (Eigen::Index j = 0; j < d; ++j) {
      const Vector dir = J.col(j);
      const double h = 1e-4 * (1.0 + x.norm()) / std::max(1e-12, dir.norm());
      u(j) = (model.log_pdf(x + h * dir) - model.log_pdf(x - h * dir)) / (2.0 * h);
    }
    if (!u.allFinite()) throw NonFiniteIntegrand("intrinsic score is not finite");
    acc.add(w * (u * u.transpose()));
  }
  return make_cfim(acc.total(), static_cast<std::size_t>(rule.size()), "intrinsic/finite_difference:" + spec.describe());
}

}  // namespace covgeo
