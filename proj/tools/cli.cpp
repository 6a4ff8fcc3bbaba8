#include "cli.hpp"

#include "covgeo/cfim.hpp"
#include "covgeo/divergence.hpp"
#include "covgeo/errors.hpp"
#include "covgeo/geometry.hpp"
#include "covgeo/inference.hpp"
#include "covgeo/io.hpp"
#include "covgeo/manifold.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace covgeo::cli {

namespace {

using io::Json;

/// Everything needed to reproduce a run; echoed into every JSON output.
struct RunConfig {
  std::string command;
  std::string input;
  std::string model;
  std::string scores;
  std::string bandwidth;
  std::string integration;
  std::uint64_t seed = 1;
  double dt = 0.0;
  double gap_threshold = 5.0;
  std::string estimator = "mean";
  std::string tangent;
  std::string manifold;
  std::string output;
  std::size_t count = 0;
  std::size_t reps = 2000;
  std::size_t n_per_rep = 500;
  std::size_t eval_rows = kDefaultKdeEvalRows;
  bool no_timestamp = false;
};

Json to_json(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  j["input"] = c.input;
  j["model"] = c.model;
  j["scores"] = c.scores;
  j["bandwidth"] = c.bandwidth;
  j["integration"] = c.integration;
  j["seed"] = c.seed;
  j["dt"] = c.dt;
  j["gap_threshold"] = c.gap_threshold;
  j["estimator"] = c.estimator;
  j["tangent"] = c.tangent;
  j["manifold"] = c.manifold;
  j["output"] = c.output;
  j["count"] = c.count;
  j["reps"] = c.reps;
  j["n_per_rep"] = c.n_per_rep;
  j["eval_rows"] = c.eval_rows;
  return j;
}

/// Invalid flag combinations.
class ConfigError : public Error {
 public:
  using Error::Error;
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string read_text_arg(const std::string& value) {
  if (!value.empty() && value.front() == '@') {
    std::ifstream in(value.substr(1));
    if (!in) throw io::ParseError("cannot open " + value.substr(1));
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  }
  return value;
}

DensityModel require_model(const RunConfig& c) {
  if (c.model.empty()) throw ConfigError(c.command + ": --model is required");
  return io::parse_model(io::parse_json_text(read_text_arg(c.model), "--model"));
}

IntegrationSpec integration_for(const RunConfig& c, int dim) {
  if (c.integration.empty()) return IntegrationSpec::default_for(dim);
  const auto colon = c.integration.find(':');
  const std::string kind = c.integration.substr(0, colon);
  const std::string value = colon == std::string::npos ? "" : c.integration.substr(colon + 1);
  try {
    if (kind == "grid") return IntegrationSpec::grid(std::stoi(value));
    if (kind == "mc") return IntegrationSpec::monte_carlo(std::stoull(value), c.seed);
  } catch (const std::logic_error&) {
  }
  throw ConfigError("--integration must be grid:<points> or mc:<draws>, got \"" + c.integration + "\"");
}

Vector bandwidth_for(const RunConfig& c, Eigen::Index dim) {
  if (c.bandwidth.empty()) return {};
  std::vector<double> values;
  std::stringstream ss(c.bandwidth);
  std::string field;
  try {
    while (std::getline(ss, field, ',')) values.push_back(std::stod(field));
  } catch (const std::logic_error&) {
    throw ConfigError("--bandwidth must be a number or a comma-separated list");
  }
  if (values.size() == 1) return Vector::Constant(dim, values[0]);
  if (static_cast<Eigen::Index>(values.size()) != dim) throw ConfigError("--bandwidth length differs from the data dimension");
  return Eigen::Map<Vector>(values.data(), dim);
}

ScoreMethod score_method_for(const RunConfig& c, const SampleMatrix& samples, bool default_kde) {
  const std::string kind = c.scores.empty() ? (default_kde ? "kde" : "analytic") : c.scores;
  if (kind == "kde") return KdeScores{bandwidth_for(c, samples.dim()), c.eval_rows};
  if (kind == "analytic") {
    DensityModel model = require_model(c);
    if (model.dim() != samples.dim()) throw ConfigError("--model dimension differs from the data dimension");
    return AnalyticScores{std::move(model)};
  }
  throw ConfigError("--scores must be analytic or kde");
}

Json envelope(const RunConfig& c, Json result) {
  result["config"] = to_json(c);
  if (!c.no_timestamp) result["timestamp"] = utc_timestamp();
  return result;
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.output.empty()) {
    out << text << '\n';
    return;
  }
  std::ofstream file(c.output);
  if (!file) throw io::ParseError("cannot write output file " + c.output);
  file << text << '\n';
}

int cmd_cfim(const RunConfig& c, std::ostream& out) {
  CovariateFIM G;
  if (!c.input.empty()) {
    const SampleMatrix samples = io::read_csv_file(c.input);
    G = estimate_cfim(score_method_for(c, samples, c.model.empty()), samples);
  } else if (!c.model.empty()) {
    const DensityModel model = require_model(c);
    G = quadrature_cfim(model, integration_for(c, model.dim()));
  } else {
    throw ConfigError("cfim: give --input (empirical) or --model (quadrature)");
  }
  Json report = io::to_json(G, spectrum(G, c.gap_threshold));
  const auto inv = check_invertibility(G);
  report["invertible"] = std::holds_alternative<Invertible>(inv);
  if (const auto* s = std::get_if<Singular>(&inv)) report["null_space"] = io::to_json(Matrix(s->null_space.transpose()));
  emit(c, io::dump(envelope(c, report)), out);
  return std::holds_alternative<Invertible>(inv) ? kOk : kSingularMetric;
}

int cmd_project(const RunConfig& c, std::ostream& out) {
  const DensityModel model = require_model(c);
  if (c.tangent.empty()) throw ConfigError("project: --tangent is required");
  Polynomial poly;
  try {
    poly = Polynomial::parse(c.tangent);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (poly.is_zero()) throw ZeroTangent("project: tangent polynomial is zero");
  const IntegrationSpec spec = integration_for(c, model.dim());
  const TangentVector h = polynomial_tangent(model, poly, spec);
  Json report = io::to_json(decompose(h, spec));
  report["tangent"] = h.label();
  emit(c, io::dump(envelope(c, report)), out);
  return kOk;
}

int cmd_klcheck(const RunConfig& c, std::ostream& out) {
  const DensityModel model = require_model(c);
  const IntegrationSpec spec = integration_for(c, model.dim());
  const CovariateFIM G = quadrature_cfim(model, spec);
  Json axes = Json::array();
  for (int i = 0; i < model.dim(); ++i) {
    const PerturbationCurve curve(model, i);
    const double dt = c.dt > 0.0 ? c.dt : default_dt(curve);
    Json axis;
    axis["axis"] = i;
    axis["cfim_diagonal"] = G.matrix(i, i);
    axis["forward"] = io::to_json(kl_derivatives(curve, KlDirection::Forward, dt, spec));
    axis["reverse"] = io::to_json(kl_derivatives(curve, KlDirection::Reverse, dt, spec));
    axis["asymmetry"] = io::to_json(asymmetry_check(curve, dt, spec));
    axes.push_back(axis);
  }
  Json report;
  report["axes"] = axes;
  report["gentropy_via_kl"] = gentropy_via_kl(model, c.dt, spec);
  report["g_entropy"] = g_entropy(G);
  emit(c, io::dump(envelope(c, report)), out);
  return kOk;
}

int cmd_crlb(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const DensityModel model = require_model(c);
  const EstimatorSpec est = EstimatorSpec::parse(c.estimator);
  const std::size_t count = c.count > 0 ? c.count : 100000;
  EfficiencyReport report;
  if (!c.input.empty()) {
    const SampleMatrix data = io::read_csv_file(c.input);
    report.estimator = est.name();
    report.crlb_samples = static_cast<std::size_t>(data.rows());
    report.crlb = covariate_crlb(data, score_method_for(c, data, false));
    report.n_per_rep = c.n_per_rep;
    report.n_reps = c.reps;
    report.est_cov = estimator_covariance(est, model, c.n_per_rep, c.reps, c.seed + 1);
    report.eff = efficiency_ratio(report.crlb, report.est_cov);
    report.notes = "per-observation convention: bound = G^-1, estimator variance scaled by n_per_rep";
  } else {
    const SampleMatrix probe = sample(model, 2, c.seed);
    report = efficiency_benchmark(est, model, score_method_for(c, probe, false), count, c.n_per_rep, c.reps, c.seed);
  }
  std::ostream& table = c.output.empty() ? err : out;
  table << std::left << std::setw(14) << "estimator" << std::setw(16) << "Tr(CRLB)" << std::setw(16) << "Tr(Var)"
        << "Eff\n";
  table << std::setw(14) << report.estimator << std::setw(16) << report.crlb.trace() << std::setw(16)
        << report.est_cov.trace() << report.eff << '\n';
  emit(c, io::dump(envelope(c, io::to_json(report))), out);
  return kOk;
}

int cmd_mhtest(const RunConfig& c, std::ostream& out) {
  if (c.input.empty()) throw ConfigError("mhtest: --input is required");
  const SampleMatrix samples = io::read_csv_file(c.input);
  const MHReport report = mh_test(samples, score_method_for(c, samples, c.model.empty()), c.gap_threshold);
  emit(c, io::dump(envelope(c, io::to_json(report))), out);
  return kOk;
}

int cmd_generate(const RunConfig& c, std::ostream& out) {
  if (c.manifold.empty()) throw ConfigError("generate: --manifold is required");
  const ManifoldSpec spec = io::parse_manifold(io::parse_json_text(read_text_arg(c.manifold), "--manifold"));
  const std::size_t count = c.count > 0 ? c.count : 10000;
  const SampleMatrix samples = generate_manifold_data(spec, count, c.seed);
  if (c.output.empty()) {
    io::write_csv(out, samples);
  } else {
    std::ofstream file(c.output);
    if (!file) throw io::ParseError("cannot write output file " + c.output);
    io::write_csv(file, samples);
  }
  return kOk;
}

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--input", c.input, "CSV sample file (header x1,...,xn)");
  sub->add_option("--model", c.model, "inline JSON density model, or @file");
  sub->add_option("--scores", c.scores, "score estimator: analytic or kde");
  sub->add_option("--bandwidth", c.bandwidth, "KDE bandwidth, one value or comma list");
  sub->add_option("--integration", c.integration, "grid:<points> or mc:<draws>");
  sub->add_option("--seed", c.seed, "RNG seed");
  sub->add_option("--dt", c.dt, "KL stencil step (default 0.02 sd per axis)");
  sub->add_option("--gap-threshold", c.gap_threshold, "minimum eigenvalue ratio for a significant gap");
  sub->add_option("--estimator", c.estimator, "mean, median or trimmed:<fraction>");
  sub->add_option("--tangent", c.tangent, "tangent score form as a polynomial, e.g. x1^2-1");
  sub->add_option("--manifold", c.manifold, "inline JSON manifold spec, or @file");
  sub->add_option("--output", c.output, "write the result here instead of stdout");
  sub->add_option("--count", c.count, "sample count");
  sub->add_option("--reps", c.reps, "estimator replications");
  sub->add_option("--n-per-rep", c.n_per_rep, "observations per replication");
  sub->add_option("--eval-rows", c.eval_rows, "rows averaged for KDE-score cFIMs (0 = all)");
  sub->add_flag("--no-timestamp", c.no_timestamp, "omit the timestamp from JSON output");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"covgeo: covariate information geometry toolkit"};
  app.require_subcommand(1);
  RunConfig config;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"cfim", "estimate the covariate Fisher information matrix"},
      {"project", "decompose a tangent direction into covariate and residual parts"},
      {"klcheck", "finite-difference KL derivative identities"},
      {"crlb", "covariate CRLB efficiency benchmark"},
      {"mhtest", "spectral-gap manifold hypothesis test"},
      {"generate", "synthetic manifold data as CSV"},
  };
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), config);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  }
  config.command = app.get_subcommands().front()->get_name();

  try {
    if (config.command == "cfim") return cmd_cfim(config, out);
    if (config.command == "project") return cmd_project(config, out);
    if (config.command == "klcheck") return cmd_klcheck(config, out);
    if (config.command == "crlb") return cmd_crlb(config, out, err);
    if (config.command == "mhtest") return cmd_mhtest(config, out);
    if (config.command == "generate") return cmd_generate(config, out);
  } catch (const io::ParseError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const SingularMetric& e) {
    err << "singular metric: " << e.what() << "\nnull space:\n" << e.null_space() << '\n';
    return kSingularMetric;
  } catch (const ZeroTangent& e) {
    err << "ZeroTangent: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  }
  return kInvalidConfig;
}

}  // namespace covgeo::cli
