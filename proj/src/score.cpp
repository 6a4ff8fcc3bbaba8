#include "covgeo/score.hpp"

#include "covgeo/errors.hpp"

#include <cmath>
#include <limits>

namespace covgeo {

namespace {

Vector gaussian_score(const model::Gaussian& g, const Vector& x) { return -g.precision * (x - g.mean); }

/// Posterior component responsibilities of a mixture at x.
Eigen::ArrayXd responsibilities(const model::GaussianMixture& mix, const Vector& x) {
  const auto K = static_cast<Eigen::Index>(mix.weights.size());
  Eigen::ArrayXd logw(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const auto& c = mix.components[static_cast<std::size_t>(k)];
    const Vector z = c.cholesky.triangularView<Eigen::Lower>().solve(x - c.mean);
    const double w = mix.weights[static_cast<std::size_t>(k)];
    logw(k) = w > 0.0 ? std::log(w) + c.log_norm - 0.5 * z.squaredNorm() : -std::numeric_limits<double>::infinity();
  }
  const double m = logw.maxCoeff();
  Eigen::ArrayXd r = (logw - m).exp();
  return r / r.sum();
}

void require_support(const model::Exponential& e, const Vector& x) {
  if (!((x - e.location).array() > 0.0).all()) throw OutOfSupport("point lies outside the exponential support");
}

}  // namespace

ScoreField ScoreField::analytic(DensityModel model) {
  if (!model.is_analytic()) throw UnsupportedModel("analytic scores need an analytic model; use kde scores");
  const int n = model.dim();
  return ScoreField(Analytic{std::move(model)}, n);
}

ScoreField ScoreField::kde(const SampleMatrix& samples, Vector bandwidth) {
  if (samples.rows() < 1) throw EmptySamples("kde scores need at least one sample");
  validate(samples);
  if (bandwidth.size() == 0) bandwidth = silverman_bandwidth(samples);
  if (bandwidth.size() != samples.dim()) throw DimensionMismatch("kde: bandwidth length differs from sample dimension");
  if (!(bandwidth.array() > 0.0).all()) throw InvalidArgument("kde: bandwidth must be positive");
  const int n = static_cast<int>(samples.dim());
  return ScoreField(Kde{samples.values, std::move(bandwidth)}, n);
}

ScoreField ScoreField::finite_difference(DensityModel model, double step) {
  const int n = model.dim();
  return ScoreField(FiniteDifference{std::move(model), step}, n);
}

Vector ScoreField::operator()(const Vector& x) const {
  if (x.size() != dim_) throw DimensionMismatch("score: point dimension differs from field dimension");
  return std::visit(
      [&](const auto& s) -> Vector {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Analytic>) {
          return analytic_score(s.model, x);
        } else if constexpr (std::is_same_v<T, Kde>) {
          return kde_score(s.samples, s.bandwidth, x);
        } else {
          return fd_score(s.model, x, s.step);
        }
      },
      *source_);
}

std::string ScoreField::source() const {
  switch (source_->index()) {
    case 0: return "analytic";
    case 1: return "kde";
    default: return "finite_difference";
  }
}

bool ScoreField::is_kde() const noexcept { return std::holds_alternative<Kde>(*source_); }

const Vector& ScoreField::bandwidth() const {
  if (const auto* k = std::get_if<Kde>(source_.get())) return k->bandwidth;
  throw UnsupportedModel("score field is not kde-backed");
}

Vector analytic_score(const DensityModel& model, const Vector& x) {
  if (x.size() != model.dim()) throw DimensionMismatch("analytic_score: point dimension differs from model dimension");
  switch (model.kind()) {
    case DensityModel::Kind::Gaussian:
      return gaussian_score(model.as_gaussian(), x);
    case DensityModel::Kind::GaussianMixture: {
      const auto& mix = model.as_mixture();
      const Eigen::ArrayXd r = responsibilities(mix, x);
      Vector s = Vector::Zero(x.size());
      for (Eigen::Index k = 0; k < r.size(); ++k) s += r(k) * gaussian_score(mix.components[static_cast<std::size_t>(k)], x);
      return s;
    }
    case DensityModel::Kind::Exponential: {
      const auto& e = model.as_exponential();
      require_support(e, x);
      return -e.rates;
    }
    case DensityModel::Kind::Product: {
      const auto& p = model.as_product();
      Vector s(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        s(i) = analytic_score(p.marginals[static_cast<std::size_t>(i)], Vector::Constant(1, x(i)))(0);
      }
      return s;
    }
    case DensityModel::Kind::Kde:
      break;
  }
  throw UnsupportedModel("analytic_score is not available for kde models; use kde_score");
}

Matrix analytic_score_jacobian(const DensityModel& model, const Vector& x) {
  if (x.size() != model.dim()) throw DimensionMismatch("analytic_score_jacobian: point dimension differs from model dimension");
  const auto n = x.size();
  switch (model.kind()) {
    case DensityModel::Kind::Gaussian:
      return -model.as_gaussian().precision;
    case DensityModel::Kind::GaussianMixture: {
      // sum_k r_k (s_k s_k^T - P_k) - s s^T
      const auto& mix = model.as_mixture();
      const Eigen::ArrayXd r = responsibilities(mix, x);
      Matrix H = Matrix::Zero(n, n);
      Vector s = Vector::Zero(n);
      for (Eigen::Index k = 0; k < r.size(); ++k) {
        const auto& c = mix.components[static_cast<std::size_t>(k)];
        const Vector sk = gaussian_score(c, x);
        H += r(k) * (sk * sk.transpose() - c.precision);
        s += r(k) * sk;
      }
      return H - s * s.transpose();
    }
    case DensityModel::Kind::Exponential:
      require_support(model.as_exponential(), x);
      return Matrix::Zero(n, n);
    case DensityModel::Kind::Product: {
      const auto& p = model.as_product();
      Matrix H = Matrix::Zero(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        H(i, i) = analytic_score_jacobian(p.marginals[static_cast<std::size_t>(i)], Vector::Constant(1, x(i)))(0, 0);
      }
      return H;
    }
    case DensityModel::Kind::Kde:
      break;
  }
  throw UnsupportedModel("analytic_score_jacobian is not available for kde models");
}

Vector kde_score(const Matrix& samples, const Vector& bandwidth, const Vector& x) {
  if (samples.rows() < 1) throw EmptySamples("kde_score: no samples");
  if (x.size() != samples.cols() || bandwidth.size() != samples.cols()) throw DimensionMismatch("kde_score: dimension mismatch");
  if (!(bandwidth.array() > 0.0).all()) throw InvalidArgument("kde_score: bandwidth must be positive");
  const auto n = samples.cols();
  Eigen::ArrayXd log_kernel = Eigen::ArrayXd::Zero(samples.rows());
  for (Eigen::Index i = 0; i < n; ++i) {
    log_kernel -= 0.5 * ((samples.col(i).array() - x(i)) / bandwidth(i)).square();
  }
  const Eigen::ArrayXd weight = (log_kernel - log_kernel.maxCoeff()).exp();
  const double total = weight.sum();
  Vector s(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s(i) = (weight * (samples.col(i).array() - x(i))).sum() / (total * bandwidth(i) * bandwidth(i));
  }
  return s;
}

Vector kde_score(const SampleMatrix& samples, const Vector& bandwidth, const Vector& x) {
  return kde_score(samples.values, bandwidth, x);
}

Vector fd_score(const DensityModel& model, const Vector& x, double step) {
  if (x.size() != model.dim()) throw DimensionMismatch("fd_score: point dimension differs from model dimension");
  Vector s(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = step > 0.0 ? step : 1e-4 * (1.0 + std::abs(x(i)));
    Vector up = x;
    Vector down = x;
    up(i) += h;
    down(i) -= h;
    const double lu = model.log_pdf(up);
    const double ld = model.log_pdf(down);
    if (!std::isfinite(lu) || !std::isfinite(ld)) throw OutOfSupport("fd_score: stencil leaves the support");
    s(i) = (lu - ld) / (2.0 * h);
  }
  return s;
}

Matrix evaluate_rows(const ScoreField& scores, const Matrix& points) {
  Matrix out(points.rows(), points.cols());
  for (Eigen::Index k = 0; k < points.rows(); ++k) out.row(k) = scores(points.row(k).transpose()).transpose();
  return out;
}

}  // namespace covgeo
