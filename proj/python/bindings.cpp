#include "cli.hpp"

#include "covgeo/cfim.hpp"
#include "covgeo/divergence.hpp"
#include "covgeo/errors.hpp"
#include "covgeo/geometry.hpp"
#include "covgeo/inference.hpp"
#include "covgeo/io.hpp"
#include "covgeo/manifold.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

namespace py = pybind11;
using namespace covgeo;

namespace {

py::object to_python(const io::Json& j) {
  switch (j.type()) {
    case io::Json::value_t::null:
      return py::none();
    case io::Json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case io::Json::value_t::number_integer:
      return py::int_(j.get<std::int64_t>());
    case io::Json::value_t::number_unsigned:
      return py::int_(j.get<std::uint64_t>());
    case io::Json::value_t::number_float:
      return py::float_(j.get<double>());
    case io::Json::value_t::string:
      return py::str(j.get<std::string>());
    case io::Json::value_t::array: {
      py::list out;
      for (const auto& x : j) out.append(to_python(x));
      return out;
    }
    default: {
      py::dict out;
      for (auto it = j.begin(); it != j.end(); ++it) out[py::str(it.key())] = to_python(it.value());
      return out;
    }
  }
}

SampleMatrix as_samples(const Matrix& values) {
  SampleMatrix s{values, 0};
  validate(s);
  return s;
}

IntegrationSpec spec_or_default(const std::optional<IntegrationSpec>& spec, int dim) {
  return spec ? *spec : IntegrationSpec::default_for(dim);
}

ScoreMethod score_method(const std::string& scores, const std::optional<DensityModel>& model,
                         const std::optional<Vector>& bandwidth, std::size_t max_eval_rows) {
  if (scores == "analytic") {
    if (!model) throw InvalidArgument("analytic scores need a model");
    return AnalyticScores{*model};
  }
  if (scores == "kde") return KdeScores{bandwidth.value_or(Vector()), max_eval_rows};
  throw InvalidArgument("scores must be 'analytic' or 'kde'");
}

}  // namespace

PYBIND11_MODULE(_covgeo, m) {
  m.doc() = "Covariate Fisher information geometry";

  // later registrations are tried first, so subclasses follow the base
  const auto base = py::register_exception<Error>(m, "CovgeoError", PyExc_RuntimeError);
  py::register_exception<SingularMetric>(m, "SingularMetric", base);
  py::register_exception<ZeroTangent>(m, "ZeroTangent", base);
  py::register_exception<io::ParseError>(m, "ParseError", base);

  py::class_<DensityModel>(m, "DensityModel")
      .def_static("gaussian", &DensityModel::gaussian, py::arg("mean"), py::arg("cov"))
      .def_static("gaussian_mixture", &DensityModel::gaussian_mixture, py::arg("weights"), py::arg("components"))
      .def_static("exponential", &DensityModel::exponential, py::arg("rates"), py::arg("location") = Vector())
      .def_static("product", &DensityModel::product, py::arg("marginals"))
      .def_static(
          "kde",
          [](const Matrix& samples, const std::optional<Vector>& bw) {
            return DensityModel::kde(as_samples(samples), bw.value_or(Vector()));
          },
          py::arg("samples"), py::arg("bandwidth") = py::none())
      .def_static(
          "from_json", [](const std::string& text) { return io::parse_model(io::parse_json_text(text, "model")); },
          py::arg("text"))
      .def("to_json", [](const DensityModel& d) { return io::dump(io::to_json(d), -1); })
      .def_property_readonly("dim", &DensityModel::dim)
      .def_property_readonly("kind", &DensityModel::kind_name)
      .def("log_pdf", &DensityModel::log_pdf, py::arg("x"))
      .def("pdf", &DensityModel::pdf, py::arg("x"))
      .def("mean", &DensityModel::mean)
      .def("stddev", &DensityModel::stddev)
      .def("translated", &DensityModel::translated, py::arg("shift"))
      .def("__eq__", [](const DensityModel& a, const DensityModel& b) { return a == b; })
      .def("__repr__", [](const DensityModel& d) { return "DensityModel(" + io::dump(io::to_json(d), -1) + ")"; });

  py::class_<IntegrationSpec>(m, "IntegrationSpec")
      .def_static("grid", [](int points) { return IntegrationSpec::grid(points); }, py::arg("points_per_axis"))
      .def_static(
          "monte_carlo", [](std::size_t draws, std::uint64_t seed) { return IntegrationSpec::monte_carlo(draws, seed); },
          py::arg("draws"), py::arg("seed"))
      .def_static("default_for", &IntegrationSpec::default_for, py::arg("dim"))
      .def("__repr__", &IntegrationSpec::describe);

  m.def(
      "sample", [](const DensityModel& model, std::size_t count, std::uint64_t seed) {
        return sample(model, count, seed).values;
      },
      py::arg("model"), py::arg("count"), py::arg("seed"));
  m.def(
      "expectation",
      [](const DensityModel& model, const std::function<double(const Vector&)>& f,
         const std::optional<IntegrationSpec>& spec) { return expectation(model, f, spec_or_default(spec, model.dim())); },
      py::arg("model"), py::arg("integrand"), py::arg("spec") = py::none());

  m.def("analytic_score", &analytic_score, py::arg("model"), py::arg("x"));
  m.def(
      "kde_score",
      [](const Matrix& samples, const Vector& bandwidth, const Vector& x) { return kde_score(samples, bandwidth, x); },
      py::arg("samples"), py::arg("bandwidth"), py::arg("x"));
  m.def("fd_score", &fd_score, py::arg("model"), py::arg("x"), py::arg("step") = 0.0);

  m.def(
      "cfim",
      [](const Matrix& samples, const std::string& scores, const std::optional<DensityModel>& model,
         const std::optional<Vector>& bandwidth, std::size_t max_eval_rows) {
        return estimate_cfim(score_method(scores, model, bandwidth, max_eval_rows), as_samples(samples)).matrix;
      },
      py::arg("samples"), py::arg("scores") = "kde", py::arg("model") = py::none(), py::arg("bandwidth") = py::none(),
      py::arg("max_eval_rows") = kDefaultKdeEvalRows, "Empirical cFIM of the rows of `samples`.");
  m.def(
      "quadrature_cfim",
      [](const DensityModel& model, const std::optional<IntegrationSpec>& spec) {
        return quadrature_cfim(model, spec_or_default(spec, model.dim())).matrix;
      },
      py::arg("model"), py::arg("spec") = py::none());
  m.def(
      "spectrum",
      [](const Matrix& G, double gap_threshold) {
        const auto cf = make_cfim(G, 0, "python");
        return to_python(io::to_json(cf, spectrum(cf, gap_threshold)));
      },
      py::arg("G"), py::arg("gap_threshold") = 5.0);
  m.def(
      "check_invertibility",
      [](const Matrix& G, double cond) {
        const auto r = check_invertibility(make_cfim(G, 0, "python"), cond);
        py::dict out;
        out["invertible"] = std::holds_alternative<Invertible>(r);
        if (const auto* inv = std::get_if<Invertible>(&r)) out["inverse"] = inv->inverse;
        if (const auto* s = std::get_if<Singular>(&r)) out["null_space"] = s->null_space;
        return out;
      },
      py::arg("G"), py::arg("cond_threshold") = 1e10);

  m.def(
      "project",
      [](const DensityModel& base, const std::string& tangent, const std::optional<IntegrationSpec>& spec) {
        const auto s = spec_or_default(spec, base.dim());
        return to_python(io::to_json(decompose(polynomial_tangent(base, Polynomial::parse(tangent), s), s)));
      },
      py::arg("base"), py::arg("tangent"), py::arg("spec") = py::none(),
      "Pythagorean decomposition of a polynomial score-form tangent.");
  m.def(
      "fisher_rao_distance",
      [](const DensityModel& a, const DensityModel& b, const std::optional<IntegrationSpec>& spec) {
        return fisher_rao_distance(a, b, spec_or_default(spec, a.dim()));
      },
      py::arg("f1"), py::arg("f2"), py::arg("spec") = py::none());

  m.def(
      "kl_divergence",
      [](const DensityModel& p, const DensityModel& q, const std::optional<IntegrationSpec>& spec) {
        return kl_divergence(p, q, spec_or_default(spec, p.dim()));
      },
      py::arg("p"), py::arg("q"), py::arg("spec") = py::none());
  m.def(
      "kl_derivatives",
      [](const DensityModel& base, int axis, const std::string& direction, double dt,
         const std::optional<IntegrationSpec>& spec) {
        const PerturbationCurve curve(base, axis);
        if (direction != "forward" && direction != "reverse") throw InvalidArgument("direction must be forward or reverse");
        const auto dir = direction == "forward" ? KlDirection::Forward : KlDirection::Reverse;
        return to_python(io::to_json(
            kl_derivatives(curve, dir, dt > 0 ? dt : default_dt(curve), spec_or_default(spec, base.dim()))));
      },
      py::arg("base"), py::arg("axis") = 0, py::arg("direction") = "forward", py::arg("dt") = 0.0,
      py::arg("spec") = py::none());
  m.def(
      "asymmetry_check",
      [](const DensityModel& base, int axis, double dt, const std::optional<IntegrationSpec>& spec) {
        const PerturbationCurve curve(base, axis);
        return to_python(
            io::to_json(asymmetry_check(curve, dt > 0 ? dt : default_dt(curve), spec_or_default(spec, base.dim()))));
      },
      py::arg("base"), py::arg("axis") = 0, py::arg("dt") = 0.0, py::arg("spec") = py::none());
  m.def(
      "gentropy_via_kl",
      [](const DensityModel& base, double dt, const std::optional<IntegrationSpec>& spec) {
        return gentropy_via_kl(base, dt, spec_or_default(spec, base.dim()));
      },
      py::arg("base"), py::arg("dt") = 0.0, py::arg("spec") = py::none());

  m.def(
      "efficiency_benchmark",
      [](const std::string& estimator, const DensityModel& model, const std::string& scores,
         std::size_t crlb_samples, std::size_t n_per_rep, std::size_t n_reps, std::uint64_t seed) {
        return to_python(io::to_json(efficiency_benchmark(EstimatorSpec::parse(estimator), model,
                                                          score_method(scores, model, std::nullopt, kDefaultKdeEvalRows),
                                                          crlb_samples, n_per_rep, n_reps, seed)));
      },
      py::arg("estimator"), py::arg("model"), py::arg("scores") = "analytic", py::arg("crlb_samples") = 100000,
      py::arg("n_per_rep") = 500, py::arg("n_reps") = 2000, py::arg("seed") = 1);

  m.def(
      "generate_manifold_data",
      [](const std::string& spec, std::size_t count, std::uint64_t seed) {
        return generate_manifold_data(io::parse_manifold(io::parse_json_text(spec, "manifold")), count, seed).values;
      },
      py::arg("spec"), py::arg("count"), py::arg("seed"));
  m.def(
      "mh_test",
      [](const Matrix& samples, const std::string& scores, const std::optional<DensityModel>& model,
         double gap_threshold) {
        return to_python(io::to_json(
            mh_test(as_samples(samples), score_method(scores, model, std::nullopt, kDefaultKdeEvalRows), gap_threshold)));
      },
      py::arg("samples"), py::arg("scores") = "kde", py::arg("model") = py::none(), py::arg("gap_threshold") = 5.0);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs one covgeo command in-process; returns (exit_code, stdout, stderr).");
}
