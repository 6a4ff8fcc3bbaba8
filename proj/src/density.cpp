#include "covgeo/density.hpp"

#include "covgeo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace covgeo {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

using Rng = std::mt19937_64;

double log_sum_exp(const Eigen::ArrayXd& a) {
  const double m = a.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((a - m).exp().sum());
}

model::Gaussian make_gaussian(Vector mean, Matrix covariance) {
  const auto n = mean.size();
  if (n < 1) throw InvalidArgument("gaussian: empty mean");
  if (covariance.rows() != n || covariance.cols() != n) throw DimensionMismatch("gaussian: covariance shape does not match mean");
  if (!mean.allFinite() || !covariance.allFinite()) throw InvalidArgument("gaussian: non-finite parameters");
  const double scale = std::max(1.0, covariance.cwiseAbs().maxCoeff());
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidArgument("gaussian: covariance is not symmetric");
  }
  covariance = 0.5 * (covariance + covariance.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(covariance, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(hi > 0.0) || lo <= 1e-12 * hi) throw InvalidArgument("gaussian: covariance is not positive definite");

  model::Gaussian g;
  Eigen::LLT<Matrix> llt(covariance);
  if (llt.info() != Eigen::Success) throw InvalidArgument("gaussian: cholesky failed");
  g.cholesky = llt.matrixL();
  g.precision = llt.solve(Matrix::Identity(n, n));
  g.precision = 0.5 * (g.precision + g.precision.transpose());
  const double log_det = 2.0 * g.cholesky.diagonal().array().log().sum();
  g.log_norm = -0.5 * (static_cast<double>(n) * kLog2Pi + log_det);
  g.mean = std::move(mean);
  g.covariance = std::move(covariance);
  return g;
}

double gaussian_log_pdf(const model::Gaussian& g, const Vector& x) {
  const Vector z = g.cholesky.triangularView<Eigen::Lower>().solve(x - g.mean);
  return g.log_norm - 0.5 * z.squaredNorm();
}

Eigen::ArrayXd kde_log_kernels(const model::Kde& k, const Vector& x) {
  Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(k.samples.rows());
  for (Eigen::Index i = 0; i < k.samples.cols(); ++i) {
    const Eigen::ArrayXd d = (k.samples.col(i).array() - x(i)) / k.bandwidth(i);
    acc -= 0.5 * d.square();
  }
  return acc;
}

Box union_box(const Box& a, const Box& b) {
  return Box{a.lower.cwiseMin(b.lower), a.upper.cwiseMax(b.upper)};
}

}  // namespace

void validate(const SampleMatrix& samples) {
  if (samples.rows() < 1 || samples.dim() < 1) throw InvalidArgument("sample matrix must have at least one row and one column");
  if (!samples.values.allFinite()) throw InvalidArgument("sample matrix contains NaN or Inf");
}

DensityModel DensityModel::gaussian(Vector mean, Matrix covariance) {
  const int n = static_cast<int>(mean.size());
  return DensityModel(make_gaussian(std::move(mean), std::move(covariance)), n);
}

DensityModel DensityModel::gaussian_mixture(std::vector<double> weights, std::vector<DensityModel> components) {
  if (weights.empty() || weights.size() != components.size()) throw InvalidArgument("mixture: weights and components differ in length");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("mixture: weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("mixture: weights must sum to 1");
  model::GaussianMixture mix;
  mix.weights = std::move(weights);
  const int n = components.front().dim();
  for (const auto& c : components) {
    if (c.kind() != Kind::Gaussian) throw UnsupportedModel("mixture: components must be gaussian");
    if (c.dim() != n) throw DimensionMismatch("mixture: components differ in dimension");
    mix.components.push_back(c.as_gaussian());
  }
  return DensityModel(std::move(mix), n);
}

DensityModel DensityModel::exponential(Vector rates, Vector location) {
  if (rates.size() < 1) throw InvalidArgument("exponential: empty rates");
  if (!(rates.array() > 0.0).all() || !rates.allFinite()) throw InvalidArgument("exponential: rates must be positive");
  if (location.size() == 0) location = Vector::Zero(rates.size());
  if (location.size() != rates.size()) throw DimensionMismatch("exponential: location length differs from rates");
  const int n = static_cast<int>(rates.size());
  return DensityModel(model::Exponential{std::move(rates), std::move(location)}, n);
}

DensityModel DensityModel::product(std::vector<DensityModel> marginals) {
  if (marginals.empty()) throw InvalidArgument("product: no marginals");
  for (const auto& m : marginals) {
    if (m.dim() != 1) throw DimensionMismatch("product: marginals must be one-dimensional");
    if (m.kind() == Kind::Kde) throw UnsupportedModel("product: kde marginals are not supported");
  }
  const int n = static_cast<int>(marginals.size());
  return DensityModel(model::Product{std::move(marginals)}, n);
}

DensityModel DensityModel::kde(const SampleMatrix& samples, Vector bandwidth) {
  validate(samples);
  if (bandwidth.size() == 0) bandwidth = silverman_bandwidth(samples);
  if (bandwidth.size() != samples.dim()) throw DimensionMismatch("kde: bandwidth length differs from sample dimension");
  if (!(bandwidth.array() > 0.0).all() || !bandwidth.allFinite()) throw InvalidArgument("kde: bandwidth must be positive");
  model::Kde k;
  k.samples = samples.values;
  k.log_norm = -std::log(static_cast<double>(samples.rows())) -
               (bandwidth.array().log() + 0.5 * kLog2Pi).sum();
  k.bandwidth = std::move(bandwidth);
  const int n = static_cast<int>(samples.dim());
  return DensityModel(std::move(k), n);
}

DensityModel::Kind DensityModel::kind() const noexcept { return static_cast<Kind>(rep_.index()); }

std::string DensityModel::kind_name() const {
  switch (kind()) {
    case Kind::Gaussian: return "gaussian";
    case Kind::GaussianMixture: return "mixture";
    case Kind::Exponential: return "exponential";
    case Kind::Product: return "product";
    case Kind::Kde: return "kde";
  }
  return "unknown";
}

double DensityModel::log_pdf(const Vector& x) const {
  if (x.size() != dim_) throw DimensionMismatch("log_pdf: point dimension differs from model dimension");
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, model::Gaussian>) {
          return gaussian_log_pdf(m, x);
        } else if constexpr (std::is_same_v<T, model::GaussianMixture>) {
          Eigen::ArrayXd terms(static_cast<Eigen::Index>(m.weights.size()));
          for (std::size_t k = 0; k < m.weights.size(); ++k) {
            terms(static_cast<Eigen::Index>(k)) =
                m.weights[k] > 0.0 ? std::log(m.weights[k]) + gaussian_log_pdf(m.components[k], x) : kNegInf;
          }
          return log_sum_exp(terms);
        } else if constexpr (std::is_same_v<T, model::Exponential>) {
          double acc = 0.0;
          for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double u = x(i) - m.location(i);
            if (!(u > 0.0)) return kNegInf;
            acc += std::log(m.rates(i)) - m.rates(i) * u;
          }
          return acc;
        } else if constexpr (std::is_same_v<T, model::Product>) {
          double acc = 0.0;
          for (std::size_t i = 0; i < m.marginals.size(); ++i) {
            acc += m.marginals[i].log_pdf(Vector::Constant(1, x(static_cast<Eigen::Index>(i))));
          }
          return acc;
        } else {
          return m.log_norm + log_sum_exp(kde_log_kernels(m, x));
        }
      },
      rep_);
}

double DensityModel::pdf(const Vector& x) const { return std::exp(log_pdf(x)); }

DensityModel DensityModel::translated(const Vector& shift) const {
  if (shift.size() != dim_) throw DimensionMismatch("translated: shift dimension differs from model dimension");
  return std::visit(
      [&](const auto& m) -> DensityModel {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, model::Gaussian>) {
          model::Gaussian g = m;
          g.mean += shift;
          return DensityModel(std::move(g), dim_);
        } else if constexpr (std::is_same_v<T, model::GaussianMixture>) {
          model::GaussianMixture mix = m;
          for (auto& c : mix.components) c.mean += shift;
          return DensityModel(std::move(mix), dim_);
        } else if constexpr (std::is_same_v<T, model::Exponential>) {
          return DensityModel(model::Exponential{m.rates, m.location + shift}, dim_);
        } else if constexpr (std::is_same_v<T, model::Product>) {
          model::Product p;
          for (std::size_t i = 0; i < m.marginals.size(); ++i) {
            p.marginals.push_back(m.marginals[i].translated(Vector::Constant(1, shift(static_cast<Eigen::Index>(i)))));
          }
          return DensityModel(std::move(p), dim_);
        } else {
          model::Kde k = m;
          k.samples.rowwise() += shift.transpose();
          return DensityModel(std::move(k), dim_);
        }
      },
      rep_);
}

Vector DensityModel::mean() const {
  return std::visit(
      [&](const auto& m) -> Vector {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, model::Gaussian>) {
          return m.mean;
        } else if constexpr (std::is_same_v<T, model::GaussianMixture>) {
          Vector mu = Vector::Zero(dim_);
          for (std::size_t k = 0; k < m.weights.size(); ++k) mu += m.weights[k] * m.components[k].mean;
          return mu;
        } else if constexpr (std::is_same_v<T, model::Exponential>) {
          return m.location + m.rates.cwiseInverse();
        } else if constexpr (std::is_same_v<T, model::Product>) {
          Vector mu(dim_);
          for (std::size_t i = 0; i < m.marginals.size(); ++i) mu(static_cast<Eigen::Index>(i)) = m.marginals[i].mean()(0);
          return mu;
        } else {
          return m.samples.colwise().mean().transpose();
        }
      },
      rep_);
}

Vector DensityModel::stddev() const {
  return std::visit(
      [&](const auto& m) -> Vector {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, model::Gaussian>) {
          return m.covariance.diagonal().cwiseSqrt();
        } else if constexpr (std::is_same_v<T, model::GaussianMixture>) {
          const Vector mu = mean();
          Vector second = Vector::Zero(dim_);
          for (std::size_t k = 0; k < m.weights.size(); ++k) {
            const auto& c = m.components[k];
            second += m.weights[k] * (c.covariance.diagonal() + c.mean.cwiseAbs2());
          }
          return (second - mu.cwiseAbs2()).cwiseMax(0.0).cwiseSqrt();
        } else if constexpr (std::is_same_v<T, model::Exponential>) {
          return m.rates.cwiseInverse();
        } else if constexpr (std::is_same_v<T, model::Product>) {
          Vector sd(dim_);
          for (std::size_t i = 0; i < m.marginals.size(); ++i) sd(static_cast<Eigen::Index>(i)) = m.marginals[i].stddev()(0);
          return sd;
        } else {
          const Eigen::RowVectorXd mu = m.samples.colwise().mean();
          const Matrix centered = m.samples.rowwise() - mu;
          const double denom = static_cast<double>(std::max<Eigen::Index>(1, m.samples.rows() - 1));
          const Vector var = centered.colwise().squaredNorm().transpose() / denom;
          return (var + m.bandwidth.cwiseAbs2()).cwiseSqrt();
        }
      },
      rep_);
}

Box DensityModel::default_box() const {
  return std::visit(
      [&](const auto& m) -> Box {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, model::Gaussian>) {
          const Vector sd = m.covariance.diagonal().cwiseSqrt();
          return Box{m.mean - 8.0 * sd, m.mean + 8.0 * sd};
        } else if constexpr (std::is_same_v<T, model::GaussianMixture>) {
          std::optional<Box> box;
          for (const auto& c : m.components) {
            const Vector sd = c.covariance.diagonal().cwiseSqrt();
            Box b{c.mean - 8.0 * sd, c.mean + 8.0 * sd};
            box = box ? union_box(*box, b) : b;
          }
          return *box;
        } else if constexpr (std::is_same_v<T, model::Exponential>) {
          return Box{m.location, m.location + 20.0 * m.rates.cwiseInverse()};
        } else if constexpr (std::is_same_v<T, model::Product>) {
          Box box{Vector(dim_), Vector(dim_)};
          for (std::size_t i = 0; i < m.marginals.size(); ++i) {
            const Box b = m.marginals[i].default_box();
            box.lower(static_cast<Eigen::Index>(i)) = b.lower(0);
            box.upper(static_cast<Eigen::Index>(i)) = b.upper(0);
          }
          return box;
        } else {
          return Box{m.samples.colwise().minCoeff().transpose() - 8.0 * m.bandwidth,
                     m.samples.colwise().maxCoeff().transpose() + 8.0 * m.bandwidth};
        }
      },
      rep_);
}

const model::Gaussian& DensityModel::as_gaussian() const {
  if (const auto* p = std::get_if<model::Gaussian>(&rep_)) return *p;
  throw UnsupportedModel("model is not gaussian");
}

const model::GaussianMixture& DensityModel::as_mixture() const {
  if (const auto* p = std::get_if<model::GaussianMixture>(&rep_)) return *p;
  throw UnsupportedModel("model is not a gaussian mixture");
}

const model::Exponential& DensityModel::as_exponential() const {
  if (const auto* p = std::get_if<model::Exponential>(&rep_)) return *p;
  throw UnsupportedModel("model is not exponential");
}

const model::Product& DensityModel::as_product() const {
  if (const auto* p = std::get_if<model::Product>(&rep_)) return *p;
  throw UnsupportedModel("model is not a product of marginals");
}

const model::Kde& DensityModel::as_kde() const {
  if (const auto* p = std::get_if<model::Kde>(&rep_)) return *p;
  throw UnsupportedModel("model is not a kernel density estimate");
}

bool operator==(const DensityModel& a, const DensityModel& b) {
  if (a.dim_ != b.dim_ || a.rep_.index() != b.rep_.index()) return false;
  return std::visit(
      [&](const auto& lhs) -> bool {
        using T = std::decay_t<decltype(lhs)>;
        const auto& rhs = std::get<T>(b.rep_);
        if constexpr (std::is_same_v<T, model::Gaussian>) {
          return lhs.mean == rhs.mean && lhs.covariance == rhs.covariance;
        } else if constexpr (std::is_same_v<T, model::GaussianMixture>) {
          if (lhs.weights != rhs.weights) return false;
          for (std::size_t k = 0; k < lhs.components.size(); ++k) {
            if (lhs.components[k].mean != rhs.components[k].mean ||
                lhs.components[k].covariance != rhs.components[k].covariance) {
              return false;
            }
          }
          return true;
        } else if constexpr (std::is_same_v<T, model::Exponential>) {
          return lhs.rates == rhs.rates && lhs.location == rhs.location;
        } else if constexpr (std::is_same_v<T, model::Product>) {
          return lhs.marginals == rhs.marginals;
        } else {
          return lhs.bandwidth == rhs.bandwidth && lhs.samples == rhs.samples;
        }
      },
      a.rep_);
}

Vector silverman_bandwidth(const SampleMatrix& samples) {
  validate(samples);
  const auto N = samples.rows();
  if (N < 2) throw InvalidArgument("silverman bandwidth needs at least two samples");
  const auto n = samples.dim();
  const Eigen::RowVectorXd mu = samples.values.colwise().mean();
  const Vector sd = ((samples.values.rowwise() - mu).colwise().squaredNorm().transpose() / static_cast<double>(N - 1)).cwiseSqrt();
  if (!(sd.array() > 0.0).all()) throw InvalidArgument("silverman bandwidth: a coordinate has zero spread");
  const double factor = 1.06 * std::pow(static_cast<double>(N), -1.0 / (static_cast<double>(n) + 4.0));
  return factor * sd;
}

double eval_pdf(const DensityModel& model, const Vector& x) { return model.pdf(x); }

namespace {

void draw_gaussian(const model::Gaussian& g, Rng& rng, Eigen::RowVectorXd& out) {
  std::normal_distribution<double> normal;
  Vector z(g.mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
  out = (g.mean + g.cholesky * z).transpose();
}

void draw(const DensityModel& model, Rng& rng, Eigen::RowVectorXd& out) {
  switch (model.kind()) {
    case DensityModel::Kind::Gaussian:
      draw_gaussian(model.as_gaussian(), rng, out);
      return;
    case DensityModel::Kind::GaussianMixture: {
      const auto& mix = model.as_mixture();
      const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      std::size_t pick = mix.weights.size() - 1;
      double cumulative = 0.0;
      for (std::size_t k = 0; k < mix.weights.size(); ++k) {
        cumulative += mix.weights[k];
        if (u < cumulative) {
          pick = k;
          break;
        }
      }
      draw_gaussian(mix.components[pick], rng, out);
      return;
    }
    case DensityModel::Kind::Exponential: {
      const auto& e = model.as_exponential();
      for (Eigen::Index i = 0; i < e.rates.size(); ++i) {
        out(i) = e.location(i) + std::exponential_distribution<double>(e.rates(i))(rng);
      }
      return;
    }
    case DensityModel::Kind::Product: {
      const auto& p = model.as_product();
      Eigen::RowVectorXd one(1);
      for (std::size_t i = 0; i < p.marginals.size(); ++i) {
        draw(p.marginals[i], rng, one);
        out(static_cast<Eigen::Index>(i)) = one(0);
      }
      return;
    }
    case DensityModel::Kind::Kde: {
      const auto& k = model.as_kde();
      std::uniform_int_distribution<Eigen::Index> pick(0, k.samples.rows() - 1);
      std::normal_distribution<double> normal;
      const Eigen::Index row = pick(rng);
      for (Eigen::Index i = 0; i < k.samples.cols(); ++i) out(i) = k.samples(row, i) + k.bandwidth(i) * normal(rng);
      return;
    }
  }
}

}  // namespace

SampleMatrix sample(const DensityModel& model, std::size_t count, std::uint64_t seed) {
  if (count < 1) throw InvalidArgument("sample: count must be at least 1");
  Rng rng(seed);
  SampleMatrix out;
  out.seed = seed;
  out.values.resize(static_cast<Eigen::Index>(count), model.dim());
  Eigen::RowVectorXd row(model.dim());
  for (Eigen::Index r = 0; r < out.values.rows(); ++r) {
    draw(model, rng, row);
    out.values.row(r) = row;
  }
  return out;
}

IntegrationSpec IntegrationSpec::grid(int points_per_axis, std::optional<Box> box) {
  if (points_per_axis < 16) throw InvalidArgument("tensor grid needs at least 16 points per axis");
  if (box && (box->lower.size() != box->upper.size() || !(box->upper.array() > box->lower.array()).all())) {
    throw InvalidArgument("tensor grid box is empty");
  }
  return IntegrationSpec(TensorGrid{points_per_axis, std::move(box)});
}

IntegrationSpec IntegrationSpec::monte_carlo(std::size_t draws, std::uint64_t seed) {
  if (draws < 1000) throw InvalidArgument("monte carlo integration needs at least 1000 draws");
  return IntegrationSpec(MonteCarlo{draws, seed});
}

IntegrationSpec IntegrationSpec::default_for(int dim) {
  const double per_axis = std::pow(200000.0, 1.0 / std::max(1, dim));
  return grid(std::clamp(static_cast<int>(per_axis), 16, 128));
}

std::string IntegrationSpec::describe() const {
  std::ostringstream os;
  if (is_grid()) {
    os << "grid:" << tensor_grid().points_per_axis;
  } else {
    os << "mc:" << monte_carlo().draws << "@" << monte_carlo().seed;
  }
  return os.str();
}

std::pair<Vector, Vector> gauss_legendre(int count) {
  if (count < 1) throw InvalidArgument("gauss_legendre: count must be positive");
  Vector nodes(count);
  Vector weights(count);
  const int half = (count + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 0; j < count; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      dp = count * (z * p0 - p1) / (z * z - 1.0);
      const double step = p0 / dp;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    nodes(i) = -z;
    nodes(count - 1 - i) = z;
    weights(i) = weights(count - 1 - i) = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {nodes, weights};
}

QuadratureRule tensor_grid(const Box& box, int points_per_axis) {
  const auto n = box.lower.size();
  if (n < 1 || box.upper.size() != n) throw DimensionMismatch("tensor_grid: malformed box");
  const double total = std::pow(static_cast<double>(points_per_axis), static_cast<double>(n));
  if (total > 4.0e6) throw InvalidArgument("tensor_grid: too many points; use monte carlo integration");
  const auto [nodes, weights] = gauss_legendre(points_per_axis);
  const Vector half_width = 0.5 * (box.upper - box.lower);
  const Vector centre = 0.5 * (box.upper + box.lower);

  const auto M = static_cast<Eigen::Index>(total);
  QuadratureRule rule;
  rule.points.resize(M, n);
  rule.weights.resize(M);
  std::vector<int> index(static_cast<std::size_t>(n), 0);
  for (Eigen::Index m = 0; m < M; ++m) {
    double w = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int k = index[static_cast<std::size_t>(i)];
      rule.points(m, i) = centre(i) + half_width(i) * nodes(k);
      w *= half_width(i) * weights(k);
    }
    rule.weights(m) = w;
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      if (++index[static_cast<std::size_t>(i)] < points_per_axis) break;
      index[static_cast<std::size_t>(i)] = 0;
    }
  }
  return rule;
}

QuadratureRule probability_rule(const DensityModel& model, const IntegrationSpec& spec) {
  if (spec.is_grid()) {
    const auto& g = spec.tensor_grid();
    const Box box = g.box ? *g.box : model.default_box();
    if (box.lower.size() != model.dim()) throw DimensionMismatch("integration box dimension differs from model dimension");
    QuadratureRule rule = tensor_grid(box, g.points_per_axis);
    for (Eigen::Index m = 0; m < rule.size(); ++m) rule.weights(m) *= model.pdf(rule.points.row(m).transpose());
    return rule;
  }
  const auto& mc = spec.monte_carlo();
  QuadratureRule rule;
  rule.points = sample(model, mc.draws, mc.seed).values;
  rule.weights = Vector::Constant(rule.points.rows(), 1.0 / static_cast<double>(mc.draws));
  return rule;
}

double expectation(const QuadratureRule& rule, const std::function<double(const Vector&)>& integrand) {
  ChunkedSum<double> sum(0.0);
  for (Eigen::Index m = 0; m < rule.size(); ++m) {
    const double w = rule.weights(m);
    if (w == 0.0) continue;
    const double value = integrand(rule.points.row(m).transpose());
    if (!std::isfinite(value)) {
      std::ostringstream os;
      os << "integrand is not finite at rule point " << m;
      throw NonFiniteIntegrand(os.str());
    }
    sum.add(w * value);
  }
  return sum.total();
}

double expectation(const DensityModel& model, const std::function<double(const Vector&)>& integrand,
                   const IntegrationSpec& spec) {
  return expectation(probability_rule(model, spec), integrand);
}

}  // namespace covgeo
