#include "covgeo/io.hpp"

#include "covgeo/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace covgeo::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string format_double(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  std::string s(buffer);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void write_json(std::ostringstream& os, const Json& j, int indent, int depth) {
  const auto pad = [&](int d) {
    if (indent > 0) os << '\n' << std::string(static_cast<std::size_t>(d * indent), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) os << ',';
        first = false;
        pad(depth + 1);
        os << Json(key).dump() << (indent > 0 ? ": " : ":");
        write_json(os, value, indent, depth + 1);
      }
      pad(depth);
      os << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[';
      bool first = true;
      for (const auto& value : j) {
        if (!first) os << ',';
        first = false;
        pad(depth + 1);
        write_json(os, value, indent, depth + 1);
      }
      pad(depth);
      os << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v)) {
        os << format_double(v);
      } else {
        os << "null";
      }
      return;
    }
    default:
      os << j.dump();
  }
}

const Json& require(const Json& j, const char* key, const std::string& context) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(context + ": missing \"" + key + "\"");
  return j.at(key);
}

DensityModel parse_gaussian_body(const Json& body) {
  Vector mean = vector_from_json(require(body, "mean", "gaussian"));
  Matrix cov;
  if (body.contains("cov")) {
    cov = matrix_from_json(body.at("cov"));
  } else if (body.contains("variance")) {
    cov = vector_from_json(body.at("variance")).asDiagonal();
  } else {
    throw ParseError("gaussian: missing \"cov\" or \"variance\"");
  }
  return DensityModel::gaussian(std::move(mean), std::move(cov));
}

}  // namespace

SampleMatrix read_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (line_no == 0 || trim(line).empty()) throw ParseError("csv: empty input, expected a header line x1,...,xn");
  const auto header = split(trim(line));
  n = header.size();
  for (const auto& name : header) {
    if (name.empty()) throw ParseError("csv line " + std::to_string(line_no) + ": empty header field");
  }
  std::vector<double> values;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(trim(line));
    if (fields.size() != n) {
      throw ParseError("csv line " + std::to_string(line_no) + ": expected " + std::to_string(n) + " fields, found " +
                       std::to_string(fields.size()));
    }
    for (const auto& f : fields) {
      char* end = nullptr;
      const double v = std::strtod(f.c_str(), &end);
      if (f.empty() || end != f.c_str() + f.size() || !std::isfinite(v)) {
        throw ParseError("csv line " + std::to_string(line_no) + ": invalid number \"" + f + "\"");
      }
      values.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw ParseError("csv: no data rows after the header");
  SampleMatrix out;
  out.values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(n));
  return out;
}

SampleMatrix read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open input file " + path);
  return read_csv(in);
}

void write_csv(std::ostream& out, const SampleMatrix& samples) {
  for (Eigen::Index i = 0; i < samples.dim(); ++i) out << (i ? "," : "") << 'x' << (i + 1);
  out << '\n';
  char buffer[32];
  for (Eigen::Index k = 0; k < samples.rows(); ++k) {
    for (Eigen::Index i = 0; i < samples.dim(); ++i) {
      std::snprintf(buffer, sizeof buffer, "%.17g", samples.values(k, i));
      out << (i ? "," : "") << buffer;
    }
    out << '\n';
  }
}

Json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(Vector(m.row(r).transpose())));
  return out;
}

Vector vector_from_json(const Json& j) {
  if (j.is_number()) return Vector::Constant(1, j.get<double>());
  if (!j.is_array()) throw ParseError("expected a number array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError("expected a number array");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Matrix matrix_from_json(const Json& j) {
  if (j.is_number()) return Matrix::Constant(1, 1, j.get<double>());
  if (!j.is_array() || j.empty()) throw ParseError("expected a non-empty array of rows");
  const auto rows = j.size();
  const auto cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw ParseError("expected an array of number rows");
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ParseError("matrix rows differ in length");
    m.row(static_cast<Eigen::Index>(r)) = vector_from_json(j[r]).transpose();
  }
  return m;
}

DensityModel parse_model(const Json& j) {
  if (!j.is_object() || j.size() != 1) throw ParseError("model: expected an object with one key naming the family");
  const std::string key = j.begin().key();
  const Json& body = j.begin().value();
  try {
    if (key == "gaussian") return parse_gaussian_body(body);
    if (key == "mixture") {
      const Json& weights = require(body, "weights", "mixture");
      const Json& comps = require(body, "components", "mixture");
      if (!weights.is_array() || !comps.is_array()) throw ParseError("mixture: weights and components must be arrays");
      std::vector<double> w;
      for (const auto& x : weights) w.push_back(x.get<double>());
      std::vector<DensityModel> c;
      for (const auto& x : comps) c.push_back(parse_gaussian_body(x.contains("gaussian") ? x.at("gaussian") : x));
      return DensityModel::gaussian_mixture(std::move(w), std::move(c));
    }
    if (key == "exponential") {
      Vector rates = vector_from_json(require(body, "rates", "exponential"));
      Vector location = body.contains("location") ? vector_from_json(body.at("location")) : Vector();
      return DensityModel::exponential(std::move(rates), std::move(location));
    }
    if (key == "product") {
      if (!body.is_array()) throw ParseError("product: expected an array of one-dimensional models");
      std::vector<DensityModel> marginals;
      for (const auto& m : body) marginals.push_back(parse_model(m));
      return DensityModel::product(std::move(marginals));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("model: " + std::string(e.what()));
  }
  throw ParseError("model: unknown family \"" + key + "\"");
}

Json to_json(const DensityModel& model) {
  Json out;
  switch (model.kind()) {
    case DensityModel::Kind::Gaussian:
      out["gaussian"] = {{"mean", to_json(model.as_gaussian().mean)}, {"cov", to_json(model.as_gaussian().covariance)}};
      break;
    case DensityModel::Kind::GaussianMixture: {
      const auto& mix = model.as_mixture();
      Json comps = Json::array();
      for (const auto& c : mix.components) comps.push_back({{"mean", to_json(c.mean)}, {"cov", to_json(c.covariance)}});
      out["mixture"] = {{"weights", mix.weights}, {"components", comps}};
      break;
    }
    case DensityModel::Kind::Exponential:
      out["exponential"] = {{"rates", to_json(model.as_exponential().rates)},
                            {"location", to_json(model.as_exponential().location)}};
      break;
    case DensityModel::Kind::Product: {
      Json parts = Json::array();
      for (const auto& m : model.as_product().marginals) parts.push_back(to_json(m));
      out["product"] = parts;
      break;
    }
    case DensityModel::Kind::Kde:
      out["kde"] = {{"samples", model.as_kde().samples.rows()}, {"bandwidth", to_json(model.as_kde().bandwidth)}};
      break;
  }
  return out;
}

ManifoldSpec parse_manifold(const Json& j) {
  if (!j.is_object()) throw ParseError("manifold: expected an object");
  try {
    const double noise = j.value("noise", 0.0);
    if (j.contains("circle")) {
      const Json& c = j.at("circle");
      return ManifoldSpec::circle(c.value("radius", 1.0), c.value("ambient", 2), noise);
    }
    if (j.contains("linear")) {
      const Json& l = j.at("linear");
      Matrix A = matrix_from_json(require(l, "A", "linear"));
      Vector offset = l.contains("offset") ? vector_from_json(l.at("offset")) : Vector();
      return ManifoldSpec::linear(std::move(A), std::move(offset), noise);
    }
    if (j.contains("helix")) {
      const Json& h = j.at("helix");
      return ManifoldSpec::helix(h.value("radius", 1.0), h.value("pitch", 1.0), h.value("turns", 2.0), noise);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("manifold: " + std::string(e.what()));
  }
  throw ParseError("manifold: expected one of \"circle\", \"linear\", \"helix\"");
}

Json to_json(const CovariateFIM& G, const SpectralReport& spectrum) {
  Json out;
  out["n"] = G.dim();
  out["matrix"] = to_json(G.matrix);
  out["eigenvalues"] = to_json(spectrum.eigenvalues);
  out["gap_index"] = spectrum.gap_index;
  out["dominance_ratio"] = spectrum.dominance_ratio;
  out["g_entropy"] = g_entropy(G);
  out["gap_ratio"] = spectrum.gap_ratio;
  out["significant_gap"] = spectrum.significant_gap;
  out["gap_threshold"] = spectrum.gap_threshold;
  out["eigenvectors"] = to_json(spectrum.eigenvectors);
  out["sample_count"] = G.sample_count;
  out["score_source"] = G.score_source;
  out["warnings"] = spectrum.warnings;
  return out;
}

Json to_json(const ProjectionResult& r) {
  Json out;
  out["weights"] = to_json(r.weights);
  out["cross_info"] = to_json(r.cross_info);
  out["explained"] = r.explained;
  out["residual"] = r.residual;
  out["total"] = r.total;
  out["capture_ratio"] = r.capture_ratio;
  return out;
}

namespace {
Json to_json(const StencilEstimate& e) { return {{"first", e.first}, {"second", e.second}, {"third", e.third}}; }
}  // namespace

Json to_json(const DerivativeReport& r) {
  Json out;
  out["direction"] = to_string(r.direction);
  out["axis"] = r.axis;
  out["step"] = r.step;
  out["first"] = r.first;
  out["second"] = r.second;
  out["third"] = r.third;
  out["half_step"] = to_json(r.half_step);
  out["richardson"] = to_json(r.richardson);
  out["dt_sweep"] = r.dt_sweep;
  out["offsets"] = r.offsets;
  out["divergences"] = r.divergences;
  return out;
}

Json to_json(const AsymmetryReport& r) {
  return {{"forward3", r.forward3},
          {"reverse3", r.reverse3},
          {"T", r.tensor},
          {"defect", r.defect},
          {"reverse_defect", r.reverse_defect}};
}

Json to_json(const EfficiencyReport& r) {
  Json out;
  out["estimator"] = r.estimator;
  out["crlb"] = to_json(r.crlb);
  out["est_cov"] = to_json(r.est_cov);
  out["trace_crlb"] = r.crlb.trace();
  out["trace_var"] = r.est_cov.trace();
  out["eff"] = r.eff;
  out["n_reps"] = r.n_reps;
  out["n_per_rep"] = r.n_per_rep;
  out["crlb_samples"] = r.crlb_samples;
  out["alignment_assumed"] = r.alignment_assumed;
  out["notes"] = r.notes;
  return out;
}

Json to_json(const MHReport& r) {
  Json out;
  out["eigenvalues"] = to_json(r.spectrum.eigenvalues);
  out["gap_ratio"] = r.gap_ratio;
  out["estimated_dim"] = r.estimated_dim;
  out["stiff_dims"] = r.stiff_dims;
  out["intrinsic_dim"] = r.intrinsic_dim;
  out["dominance_ratio"] = r.dominance_ratio;
  out["decision"] = to_string(r.decision);
  out["gap_threshold"] = r.threshold;
  out["score_source"] = r.score_source;
  out["heuristic"] = true;
  return out;
}

std::string dump(const Json& j, int indent) {
  std::ostringstream os;
  write_json(os, j, indent, 0);
  return os.str();
}

}  // namespace covgeo::io
