// Parameter ingestion from JSON (strict keys) and deterministic report
// emission: keys sorted, floats rounded to 12 significant digits so that
// identical inputs produce byte-identical artifacts across platforms.
#pragma once

#include <string>

#include "json.hpp"  // vendored nlohmann/json single header

#include "rbm/model.hpp"

namespace rbm::io {

using json = nlohmann::json;

class ParseError : public std::runtime_error {
  public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Parses {sigma1, sigma2, rho, mu1, mu2, r1, r2, wedge} with
/// wedge in {"three_quarter", "quarter"}; unknown keys are rejected.
RawParams parse_raw_params(const json& j);
RawParams load_raw_params(const std::string& path);

/// Round to 12 significant digits (deterministic float formatting).
double round12(double x);
json num(double x);
json num(Complex z);  // {"re": ..., "im": ...}

/// Full resolved parameter set, embedded in every report for provenance.
json params_to_json(const ModelParams& m);

/// Serialize with sorted keys and a trailing newline.
std::string dump_sorted(const json& j);
void write_file(const std::string& path, const std::string& contents);

}  // namespace rbm::io
