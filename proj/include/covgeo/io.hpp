#pragma once

#include "covgeo/cfim.hpp"
#include "covgeo/density.hpp"
#include "covgeo/divergence.hpp"
#include "covgeo/errors.hpp"
#include "covgeo/geometry.hpp"
#include "covgeo/inference.hpp"
#include "covgeo/manifold.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <string>

namespace covgeo::io {

using Json = nlohmann::ordered_json;

/// Malformed input file or inline spec. The message names the offending line
/// where there is one.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// CSV with a header line `x1,...,xn` followed by rows of decimal floats.
SampleMatrix read_csv(std::istream& in);
SampleMatrix read_csv_file(const std::string& path);
void write_csv(std::ostream& out, const SampleMatrix& samples);

/// {"gaussian": {"mean": [...], "cov": [[...]]}},
/// {"mixture": {"weights": [...], "components": [<gaussian body>, ...]}},
/// {"exponential": {"rates": [...], "location": [...]}},
/// {"product": [<model>, ...]}.
DensityModel parse_model(const Json& j);
Json to_json(const DensityModel& model);

/// {"circle": {"radius": r, "ambient": n}, "noise": eps},
/// {"linear": {"A": [[...]], "offset": [...]}, "noise": eps},
/// {"helix": {"radius": r, "pitch": p, "turns": t}, "noise": eps}.
ManifoldSpec parse_manifold(const Json& j);

Json parse_json_text(const std::string& text, const std::string& what);

Json to_json(const Vector& v);
Json to_json(const Matrix& m);
Vector vector_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);

Json to_json(const CovariateFIM& G, const SpectralReport& spectrum);
Json to_json(const ProjectionResult& r);
Json to_json(const DerivativeReport& r);
Json to_json(const AsymmetryReport& r);
Json to_json(const EfficiencyReport& r);
Json to_json(const MHReport& r);

/// Serializes with every floating-point value written to 17 significant
/// digits. Non-finite values become null.
std::string dump(const Json& j, int indent = 2);

}  // namespace covgeo::io
